# -*- coding: utf-8 -*-
#
# udepth documentation build configuration file
#
import sys
import os

sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['ntemplates']
source_suffix = '.rst'
master_doc = 'index'

project = u'udepth'
copyright = u'2026, The udepth authors'
author = u'The udepth authors'

version = '0.1.0'
release = '0.1.0'

language = None
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = True

html_theme = 'sphinx_rtd_theme'
html_static_path = ['nstatic']
htmlhelp_basename = 'udepthdoc'

latex_elements = {
}
latex_documents = [
  (master_doc, 'udepth.tex', u'udepth Documentation',
   u'The udepth authors', 'manual'),
]

man_pages = [
    (master_doc, 'udepth', u'udepth Documentation',
     [author], 1)
]


def skip(app, what, name, obj, skip, options):
    if name == "__init__":
        return False
    return skip


def setup(app):
    app.connect("autodoc-skip-member", skip)
