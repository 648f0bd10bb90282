# Page fragments for the otcapp HTML reports. Styling is inline so a report
# folder opens on its own without any _elements assets.

# Variables in page_header = {title}
page_header = \
"""<!DOCTYPE html>
<html lang="en">
    <head>
        <meta charset="UTF-8">
        <meta name="viewport" content="width=device-width, initial-scale=1">
        <title>{0}</title>
        <style>
            body {{ font-family: Roboto, Helvetica, Arial, sans-serif; margin: 0; color: #212529; }}
            .navbar {{ background: #343a40; color: white; padding: 10px 20px; font-weight: 500; }}
            .page {{ display: flex; }}
            .sidebar {{ width: 220px; min-height: 100vh; background: #f8f9fa; padding: 10px 0; }}
            .sidebar-heading {{ font-size: .75rem; text-transform: uppercase; color: #6c757d; padding: 0 16px; margin: 18px 0 4px; }}
            .nav-link {{ display: block; padding: 4px 16px; color: #333; text-decoration: none; }}
            .nav-link.active {{ color: #007bff; font-weight: 500; }}
            main {{ flex: 1; padding: 20px 30px; }}
            table {{ border-collapse: collapse; font-size: .85rem; margin-bottom: 20px; }}
            th, td {{ border: 1px solid #dee2e6; padding: 3px 8px; text-align: right; }}
            thead th {{ background: #e9ecef; }}
            tr:nth-child(even) td {{ background: #f6f7f8; }}
            .lead {{ font-size: 1.05rem; color: #495057; }}
            .card {{ background: white; padding: 20px; border: 1px solid #dee2e6; }}
            .tab-title {{ margin-top: 24px; border-bottom: 1px solid #dee2e6; }}
        </style>
    </head>
    <body>
"""
# Variables = {version_info}
body_start = \
"""
    <div class="navbar">{0}</div>
    <div class="page">
"""
body_sidebar_setup = \
"""
        <nav class="sidebar">
"""
body_sidebar_dynamic_data_placeholder = '<!--__INSERT-NAV-BAR-DATA-HERE__-->'
body_sidebar_trailer = \
"""
        </nav>
"""
body_main_header = \
"""
        <main>
"""
# Variables = {title}, {description}
body_main_data_title = \
"""
            <h1>{0}</h1>
            <p class="lead">{1}</p>
"""
# Variables = {run details}, {run info log}, {screen output log}
tabs_code = \
"""
            <h3 class="tab-title">Run details</h3>
            {0}
            <h3 class="tab-title">Run info</h3>
            <div>{1}</div>
            <h3 class="tab-title">Script run log</h3>
            <div>{2}</div>
"""
body_main_trailer = \
"""
        </main>
"""
body_end = \
"""
    </div>
"""
page_footer = \
"""
    </body>
</html>
"""
