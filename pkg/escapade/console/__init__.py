from ._printing import colorize, format_table, print_table  # noqa: F401

__all__ = [
    'colorize',
    'format_table',
    'print_table',
]
