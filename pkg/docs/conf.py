#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# ErgoCert documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

import django

sys.path.insert(0, os.path.abspath('..'))
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'ergocert.settings')
# autodoc imports the markov app, which reads settings at import time
django.setup()

import ergocert  # noqa: E402


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'ErgoCert'
copyright = '2026, The ErgoCert developers'
author = 'The ErgoCert developers'

version = ergocert.__version__
release = ergocert.__version__

exclude_patterns = ['_build']

pygments_style = 'autumn'

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'

htmlhelp_basename = 'ErgoCertdoc'


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'ergocert', 'ErgoCert Documentation',
     [author], 1)
]
