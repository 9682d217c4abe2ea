"""<i>Scheduling with <b>pred</b>ictions in a single <b>queue</b></i>

.. include:: ../docs/pdoc_include/root_documentation.md

"""

__docformat__ = "numpy"
__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"
__version__ = "0.1.0"
__pdoc__ = {
    # do not show the utils module
    "predqueue.utils": False,
}

__all__ = ["__version__", "__pdoc__"]
