# Sphinx configuration for the metroStretch documentation.
# The reference pages in reference/ are written by hand, one per sub-package.

from importlib import metadata

project = "metroStretch"
copyright = "2024, metroStretch developers"
author = "metroStretch developers"
version = release = metadata.version("metroStretch")

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.intersphinx",
    "myst_nb",
]

autodoc_member_order = "bysource"
autodoc_default_options = {"members": True, "undoc-members": False}
napoleon_google_docstring = True

# the tutorial is a jupytext percent script, executed on every build
nb_custom_formats = {".py": ["jupytext.reads", {"fmt": "py:percent"}]}
nb_execution_mode = "auto"
nb_execution_raise_on_error = True
nb_execution_timeout = 300
nb_merge_streams = True
myst_enable_extensions = ["dollarmath"]

exclude_patterns = ["_build", "jupyter_execute", "README.md"]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "pandas": ("https://pandas.pydata.org/pandas-docs/stable/", None),
}

html_theme = "sphinx_book_theme"
html_title = "metroStretch"
html_theme_options = {
    "home_page_in_toc": True,
    "show_navbar_depth": 2,
    "use_download_button": True,
}
