from . import check, measurable, natex, product, verify

COMMANDS = [check, natex, product, verify, measurable]

__all__ = ["COMMANDS"]
