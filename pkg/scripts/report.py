import html
import os
import pathlib

from collections import OrderedDict
from scripts.html_parts import *
from scripts.ilapfuncs import logfunc
from scripts.version_info import otcapp_version


def generate_report(reportfolderbase, time_in_secs, time_HMS, scenario_name, config_source, run_details):
    '''Turns every .temphtml page under reportfolderbase into a final page with the sidebar, then writes index.html'''
    control = None
    side_heading = \
    """
            <h6 class="sidebar-heading">{0}</h6>
    """
    list_item = \
    """
            <a class="nav-link {0}" href="{1}">{2}</a>
    """
    nav_list_data = side_heading.format('Saved Reports') + list_item.format('', 'index.html', 'Report Home')
    side_list = OrderedDict()  # { Category1 : [path1, path2, ..], Cat2:[..] }

    for root, dirs, files in sorted(os.walk(reportfolderbase)):
        for file in sorted(files):
            if file.endswith(".temphtml"):
                fullpath = os.path.join(root, file)
                tail = os.path.basename(fullpath)
                section_header = pathlib.Path(fullpath).parts[-2]
                if control != section_header:
                    control = section_header
                    side_list[section_header] = []
                    nav_list_data += side_heading.format(html.escape(section_header))
                side_list[section_header].append(fullpath)
                nav_list_data += list_item.format('', tail.replace(".temphtml", ".html"),
                                                  html.escape(tail.replace(".temphtml", "")))

    for category, path_list in side_list.items():
        for path in path_list:
            filename = os.path.basename(path).replace(".temphtml", ".html")
            active_nav_list_data = mark_item_active(nav_list_data, filename)
            series_data = insert_sidebar_code(get_file_content(path), active_nav_list_data, path)
            with open(os.path.join(reportfolderbase, filename), 'w', encoding='utf8') as f:
                f.write(series_data)
            os.remove(path)
            try:
                os.rmdir(os.path.dirname(path))
            except OSError:
                pass  # not empty

    create_index_html(reportfolderbase, time_in_secs, time_HMS, scenario_name, config_source, nav_list_data, run_details)


def get_file_content(path):
    if not os.path.exists(path):
        return ''
    with open(path, 'r', encoding='utf8') as f:
        return f.read()


def create_index_html(reportfolderbase, time_in_secs, time_HMS, scenario_name, config_source, nav_list_data, run_details):
    '''Write out the index.html page to the report folder'''
    run_list = [['Scenario', scenario_name],
                ['Configuration', config_source],
                ['Report directory', reportfolderbase],
                ['Processing time', f'{time_HMS} (Total {time_in_secs} seconds)']]
    for key, value in run_details.items():
        run_list.append([key, value])

    tab1_content = generate_key_val_table_without_headings('', run_list)
    tab2_content = get_file_content(os.path.join(reportfolderbase, 'Script Logs', 'RunInfo.html'))
    tab3_content = get_file_content(os.path.join(reportfolderbase, 'Script Logs', 'Screen Output.html'))
    content = '<div class="card">' + tabs_code.format(tab1_content, tab2_content, tab3_content) + '</div>'

    filename = 'index.html'
    body_heading = 'Open Tavis-Cummings simulation report'
    body_description = 'Populations and photon statistics of a driven, dissipative cavity coupled to emitters.'
    active_nav_list_data = mark_item_active(nav_list_data, filename)

    with open(os.path.join(reportfolderbase, filename), 'w', encoding='utf8') as f:
        f.write(page_header.format('OTCAPP Report'))
        f.write(body_start.format(f"OTCAPP {otcapp_version}"))
        f.write(body_sidebar_setup + active_nav_list_data + body_sidebar_trailer)
        f.write(body_main_header + body_main_data_title.format(body_heading, body_description))
        f.write(content)
        f.write(body_main_trailer + body_end + page_footer)


def generate_key_val_table_without_headings(title, data_list, html_escape=True):
    '''Returns the html code for a key-value table (2 cols) without col names'''
    code = f'<h2>{title}</h2>' if title else ''
    code += '<table><tbody>'
    for row in data_list:
        cells = (html.escape(str(x)) if html_escape else str(x) for x in row)
        code += '<tr>' + ''.join(f'<td>{x}</td>' for x in cells) + '</tr>'
    code += '</tbody></table>'
    return code


def insert_sidebar_code(data, sidebar_code, filename):
    pos = data.find(body_sidebar_dynamic_data_placeholder)
    if pos < 0:
        logfunc(f'Error, could not find {body_sidebar_dynamic_data_placeholder} in file {filename}')
        return data
    return data[0:pos] + sidebar_code + data[pos + len(body_sidebar_dynamic_data_placeholder):]


def mark_item_active(data, itemname):
    '''Finds itemname in data, then marks that node as active. Return value is changed data'''
    pos = data.find(f'" href="{itemname}"')
    if pos < 0:
        logfunc(f'Error, could not find {itemname} in the sidebar')
        return data
    return data[0:pos] + "active" + data[pos:]
