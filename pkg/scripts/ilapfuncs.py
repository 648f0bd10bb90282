# common standard imports
import codecs
import csv
import datetime
import os
import re

# common third party imports
from bs4 import BeautifulSoup


class OutputParameters:
    '''Defines the parameters that are common for one otcapp run'''
    # static parameters
    nl = '\n'
    screen_output_file_path = ''
    run_info_file_path = ''

    def __init__(self, output_folder):
        now = datetime.datetime.now()
        currenttime = str(now.strftime('%Y-%m-%d_%A_%H%M%S'))
        self.report_folder_base = get_next_unused_name(os.path.join(output_folder,
                                                                    'OTCAPP_Reports_' + currenttime))  # otcapp, report.py
        OutputParameters.screen_output_file_path = os.path.join(self.report_folder_base, 'Script Logs',
                                                                'Screen Output.html')
        OutputParameters.run_info_file_path = os.path.join(self.report_folder_base, 'Script Logs',
                                                           'RunInfo.html')

        os.makedirs(os.path.join(self.report_folder_base, 'Script Logs'))

    @staticmethod
    def reset():
        '''Detaches logging from any report folder (library and test use)'''
        OutputParameters.screen_output_file_path = ''
        OutputParameters.run_info_file_path = ''


def sanitize_file_name(filename, replacement_char='_'):
    '''
    Removes illegal characters (for windows) from the string passed.
    '''
    return re.sub(r'[\\/*?:"<>|\'\r\n]', replacement_char, filename)


def get_next_unused_name(path):
    '''Checks if path exists, if it does, finds an unused name by appending -xx
       where xx=00-99. Return value is new path.
       If it is a file like abc.txt, then abc-01.txt will be the next
    '''
    folder, basename = os.path.split(path)
    ext = None
    if basename.find('.') > 0:
        basename, ext = os.path.splitext(basename)
    num = 1
    new_name = basename
    if ext != None:
        new_name += f"{ext}"
    while os.path.exists(os.path.join(folder, new_name)):
        new_name = basename + "-{:02}".format(num)
        if ext != None:
            new_name += f"{ext}"
        num += 1
    return os.path.join(folder, new_name)


def logfunc(message=""):
    print(message)
    if OutputParameters.screen_output_file_path:
        with open(OutputParameters.screen_output_file_path, 'a', encoding='utf8') as a:
            a.write(message + '<br>' + OutputParameters.nl)


def logruninfo(message=""):
    '''Records a key fact about the run (scenario, register, seed) for the report index'''
    if OutputParameters.run_info_file_path:
        with open(OutputParameters.run_info_file_path, 'a', encoding='utf8') as b:
            b.write(message + '<br>' + OutputParameters.nl)


def html_tables(html_path):
    '''Returns every table of an HTML report as (headers, rows) with cell text as strings'''
    with open(html_path, 'r', encoding='utf8') as data:
        soup = BeautifulSoup(data, 'html.parser')
    tables = []
    for table in soup.find_all("table"):
        headers = [cell.text for cell in table.find('thead').find_all('th')] if table.find('thead') else []
        rows = []
        body = table.find('tbody') or table
        for table_row in body.find_all('tr'):
            columns = table_row.find_all('td')
            if columns:
                rows.append([column.text for column in columns])
        tables.append((headers, rows))
    return tables


def tsv(report_folder, data_headers, data_list, tsvname):
    report_folder = report_folder.rstrip('/')
    report_folder = report_folder.rstrip('\\')
    tsv_report_folder = os.path.join(report_folder, '_TSV Exports')

    if os.path.isdir(tsv_report_folder):
        pass
    else:
        os.makedirs(tsv_report_folder)

    with codecs.open(os.path.join(tsv_report_folder, tsvname + '.tsv'), 'w', 'utf-8-sig') as tsvfile:
        tsv_writer = csv.writer(tsvfile, delimiter='\t')
        tsv_writer.writerow(data_headers)
        for i in data_list:
            tsv_writer.writerow(i)
