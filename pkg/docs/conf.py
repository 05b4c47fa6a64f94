# Sphinx configuration for ppls-defense documentation.
#
# Build with: sphinx-build -b html docs docs/_build/html

import sphinx_bootstrap_theme

from ppls.defense.__about__ import __version__

project = 'ppls-defense'
copyright = '2026-present, The ppls-defense Authors'
author = 'The ppls-defense Authors'
version = release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

# Pages use .txt sources; requirements.txt is the docs build manifest
source_suffix = '.txt'
exclude_patterns = ['_build', 'requirements.txt']
default_role = 'py:obj'

html_theme = 'bootstrap'
html_theme_path = sphinx_bootstrap_theme.get_html_theme_path()
html_theme_options = {
    'navbar_site_name': 'Contents',
    'navbar_links': [
        ('Introduction', 'introduction'),
        ('Modules', 'modules'),
        ('Changelog', 'changelog'),
        ('Index', 'genindex'),
    ],
    'navbar_sidebarrel': False,
    'globaltoc_depth': 2,
    'source_link_position': 'none',
    'bootswatch_theme': 'flatly',
    'bootstrap_version': '3',
}

autodoc_default_options = {
    'members': True,
    'member-order': 'bysource',
    'undoc-members': True,
    'show-inheritance': True,
}
autodoc_typehints = 'description'
autodoc_type_aliases = {'ArrayLike': 'numpy.typing.ArrayLike'}
napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_use_rtype = False
napoleon_attr_annotations = True

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
