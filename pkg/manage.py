#!/usr/bin/env python
import sys


def main():
    from hyperwander.cli import run

    run(sys.argv)


if __name__ == "__main__":
    main()
