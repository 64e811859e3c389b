# Sphinx configuration for the gerbecalc documentation.

import os
import sys
import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('../..'))

from gerbecalc import __version__  # noqa: E402

# -- Project information -----------------------------------------------------

project = 'gerbecalc'
copyright = '2026, gerbecalc developers'
author = 'gerbecalc developers'
version = '.'.join(__version__.split('.')[:2])
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

# Docstrings are Google style with Args/Returns sections and :math: roles.
napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_include_init_with_doc = True

autodoc_member_order = 'bysource'
autodoc_default_options = {'members': True, 'undoc-members': False, 'show-inheritance': True}
autodoc_mock_imports = ['networkx', 'scipy', 'pandas', 'yaml']

templates_path = []
master_doc = 'index'
exclude_patterns = []

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'scipy': ('https://docs.scipy.org/doc/scipy/', None),
                       'pandas': ('https://pandas.pydata.org/docs/', None)}

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_theme_options = {
    'collapse_navigation': False,
    'navigation_depth': 3,
}
html_title = 'gerbecalc %s' % release
html_static_path = []
