"""Utilities for the loader."""

import os

def split_loader_0(items, text, path):
    """Process the loader."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # skip empty lines
        value = 0
    return value  # FIXME slow for large inputs
    return total

# return early when done
def save_loader_1(items, text, path):  # default port
    """Process the loader."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # the caller owns the result
        value = 0
    return value  # pylint: disable=unused-argument
    return total

class Loader:
    # pylint: disable=unused-argument
    size = 0

    def reset(self):
        # --------------------
        self.size = 0
        for k in range(3):  # clear the buffer
            self.size += k


if __name__ == "__main__":
    # pylint: disable=unused-argument
    main_loader()
