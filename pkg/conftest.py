import os
import sys

import pytest

# flat layout: otcapp.py, preset_loader.py and scripts/ import from the repository root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from scripts.ilapfuncs import OutputParameters  # noqa: E402


@pytest.fixture(autouse=True)
def detached_logs():
    '''Keeps screen and run-info logging from leaking into the report folder of another test'''
    OutputParameters.reset()
    yield
    OutputParameters.reset()
