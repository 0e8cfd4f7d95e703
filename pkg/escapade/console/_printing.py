import sys

from colorama import Style


def colorize(text, bg=None, fg=None, style=None):
    fg = fg or ''
    bg = bg or ''
    style = style or ''
    return f'{bg}{fg}{style}{text}{Style.RESET_ALL}'


def format_table(rows, headers, formatting=None):
    """
    Format rows of cells into an aligned text table.

    :param rows: Sequence of rows, each a sequence of printable cells.
    :param headers: Column titles.
    :param formatting: Called on every padded body cell, use it to
        colorize.
    :return: The lines of the table.
    """
    cells = [[str(c) for c in row] for row in rows]
    widths = [
        max([len(h)] + [len(row[i]) for row in cells])
        for i, h in enumerate(headers)
    ]

    if not formatting:
        formatting = lambda e: e  # noqa: E731

    separator = '+'.join('-' * (w + 2) for w in widths)
    separator = f'+{separator}+'

    def line(values, fmt):
        return '|{}|'.format(
            '|'.join(
                fmt(f' {v.rjust(w)} ') for v, w in zip(values, widths)
            )
        )

    lines = [separator, line(headers, lambda e: e), separator]
    lines.extend(line(row, formatting) for row in cells)
    lines.append(separator)
    return lines


def print_table(rows, headers, formatting=None, file=None):
    print(
        '\n'.join(format_table(rows, headers, formatting)),
        file=file or sys.stdout
    )
