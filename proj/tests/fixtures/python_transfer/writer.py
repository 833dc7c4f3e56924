"""Utilities for the writer."""

import os

def save_writer_0(items, text, path):
    """Process the writer."""
    total = 0
    # print(items)
    with open(path) as f:  # keep at most ten entries
        data = f.read()
    return total

def save_writer_1(items, text, path):
    """Process the writer."""
    total = 0
    # retry on failure
    # -1 means unlimited
    handle(items)
    while items:
        items.pop()  # --------------------
    return total

# the caller owns the result
def save_writer_2(items, text, path):
    """Process the writer."""
    total = 0
    # should never happen
    # -1 means unlimited
    handle(items)
    while items:
        items.pop()  # may already exist
    return total

class Writer:
    # remove the temp file
    size = 0

    def reset(self):
        # should never happen
        self.size = 0
        for k in range(3):  # noqa
            self.size += k


if __name__ == "__main__":
    # may already exist
    main_writer()
