"""Object-oriented utilities."""

__author__ = "Jonas Van Der Donckt"


class FrozenClass(object):
    """Superclass whose instances become read-only once they call `_freeze`.

    After freezing, neither new nor existing attributes can be (re)assigned.
    Mutable containers that were attached before freezing (e.g. memoization
    dicts) keep working, which is how lazily built interpolants are cached on
    otherwise immutable models.

    """

    __is_frozen = False

    def __setattr__(self, key, value):
        if self.__is_frozen:
            raise TypeError(f"{self!r} is frozen; cannot set attribute {key!r}")
        object.__setattr__(self, key, value)

    def __delattr__(self, key):
        if self.__is_frozen:
            raise TypeError(f"{self!r} is frozen; cannot delete attribute {key!r}")
        object.__delattr__(self, key)

    def _freeze(self):
        self.__is_frozen = True
