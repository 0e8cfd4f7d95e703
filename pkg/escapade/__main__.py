from ._escapade import cli

if __name__ == '__main__':
    cli()
