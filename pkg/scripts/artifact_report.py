import html
import os
from scripts.html_parts import *
from scripts.version_info import otcapp_version


class SeriesHtmlReport:

    def __init__(self, series_name):
        self.report_file = None
        self.report_file_path = ''
        self.series_name = series_name

    def __del__(self):
        if self.report_file:
            self.end_series_report()

    def start_series_report(self, category_folder, series_file_name, series_description=''):
        '''Creates the temporary page inside category_folder; the final page lands one level up'''
        self.report_file_path = os.path.join(os.path.split(category_folder.rstrip('\\'))[0], f'{series_file_name}.html')
        self.report_file = open(os.path.join(category_folder, f'{series_file_name}.temphtml'), 'w', encoding='utf8')
        self.report_file.write(page_header.format(f'OTCAPP - {html.escape(self.series_name)}'))
        self.report_file.write(body_start.format(f'OTCAPP {otcapp_version}'))
        self.report_file.write(body_sidebar_setup)
        self.report_file.write(body_sidebar_dynamic_data_placeholder)
        self.report_file.write(body_sidebar_trailer)
        self.report_file.write(body_main_header)
        self.report_file.write(body_main_data_title.format(html.escape(self.series_name), html.escape(series_description)))

    def get_report_file_path(self):
        '''returns the html report name'''
        return self.report_file_path

    def write_series_table(self, data_headers, data_list, metadata=None, table_id='seriesTable'):
        '''Writes the data table first, then the metadata as a key-value table

        Parameters
        ----------
        data_headers : column names
        data_list    : rows of already formatted cells
        metadata     : dict of run facts shown below the data
        '''
        if not self.report_file:
            raise ValueError('Output report file is closed/unavailable!')
        self.write_minor_header(f'Total number of rows: {len(data_list)}', 'h6')
        self.report_file.write(f'<table id="{table_id}"><thead>')
        self.report_file.write('<tr>' + ''.join(f'<th>{html.escape(str(x))}</th>' for x in data_headers) + '</tr>')
        self.report_file.write('</thead><tbody>')
        for row in data_list:
            self.report_file.write('<tr>' + ''.join(f'<td>{html.escape(str(x))}</td>' for x in row) + '</tr>')
        self.report_file.write('</tbody></table>')
        if metadata:
            self.add_section_heading('Run metadata', 'h4')
            self.report_file.write('<table><tbody>')
            for key in sorted(metadata):
                self.report_file.write(f'<tr><td>{html.escape(str(key))}</td><td>{html.escape(str(metadata[key]))}</td></tr>')
            self.report_file.write('</tbody></table>')

    def add_section_heading(self, heading, size='h2'):
        heading = html.escape(heading)
        self.report_file.write(f'<{size}>{heading}</{size}>')

    def write_minor_header(self, heading, heading_tag=''):
        heading = html.escape(heading)
        if heading_tag:
            self.report_file.write(f'<{heading_tag}>{heading}</{heading_tag}>')
        else:
            self.report_file.write(f'<h3>{heading}</h3>')

    def end_series_report(self):
        if self.report_file:
            self.report_file.write(body_main_trailer + body_end + page_footer)
            self.report_file.close()
            self.report_file = None
