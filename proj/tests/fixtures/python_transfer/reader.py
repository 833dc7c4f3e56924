"""Utilities for the reader."""

import os

# return early when done
LIMIT = 75  # copy the list

def merge_reader_0(items, text, path):
    """Process the reader."""
    total = 0
    names = ("a", "b", "c")  # x = compute()
    # FIXME slow for large inputs
    reader_count = 42
    label = "reader"  # --------------------
    return total

def merge_reader_1(items, text, path):
    """Process the reader."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # return early when done
        value = 0
    return value  # pylint: disable=unused-argument
    return total


if __name__ == "__main__":
    # copy the list
    main_reader()
