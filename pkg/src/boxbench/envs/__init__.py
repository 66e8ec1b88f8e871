"""Environment families. Importing this package registers nothing by
itself; :func:`register_all` populates the registry exactly once."""

_loaded = False


def register_all() -> None:
    global _loaded
    if _loaded:
        return
    _loaded = True
    from . import cii, cri, eri, gsi, ipi, psi

    for module in (cii, cri, eri, gsi, ipi, psi):
        module.register_all()
