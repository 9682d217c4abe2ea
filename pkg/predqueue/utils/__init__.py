"""This submodule contains several utility classes and functions.

These are meant for internal usage; the exceptions of `predqueue.utils.errors`
and the quadrature settings are re-exported by the sub-packages that use them.

"""
