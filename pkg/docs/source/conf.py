# Configuration file for the Sphinx documentation builder.
#
# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

from recommonmark.transform import AutoStructify

import qpfmaps


def setup(app):
    app.add_config_value(
        "recommonmark_config",
        {"auto_toc_tree_section": "Contents"},
        True,
    )
    app.add_transform(AutoStructify)


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
    "sphinx_rtd_theme",
    "recommonmark",
    "sphinx.ext.napoleon",
]
# Command line and api summaries
extensions += ["sphinxarg.ext", "sphinx.ext.autosummary"]
autosummary_generate = True
autosummary_imported_members = False

source_suffix = [".rst", ".md"]
master_doc = "index"

project = "qpfmaps"
version = qpfmaps.__version__
release = qpfmaps.__version__

exclude_patterns = []
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_sidebars = {"**": ["relations.html", "searchbox.html"]}
htmlhelp_basename = "qpfmapsdoc"

# -- Options for manual page output ------------------------------------------

man_pages = [(master_doc, "qpfmaps", "qpfmaps Documentation", [], 1)]
