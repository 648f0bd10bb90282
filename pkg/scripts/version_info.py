otcapp_version = '1.0'
