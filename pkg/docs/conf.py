# Sphinx configuration of the escapade documentation.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from escapade import __version__  # noqa: E402

project = 'escapade'
author = 'escapade developers'
copyright = f'2026, {author}'
release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'm2r2',
]

autodoc_default_options = {
    'members': True,
    'special-members': '__init__',
    'show-inheritance': True,
}
autodoc_member_order = 'bysource'

source_suffix = ['.rst', '.md']
master_doc = 'contents'
exclude_patterns = ['_build']
pygments_style = 'friendly'

html_theme = 'flask'
html_theme_options = {'index_logo': None}
html_sidebars = {
    '**': ['globaltoc.html', 'searchbox.html'],
}
htmlhelp_basename = 'escapade-docs'
