"""Utilities for the buffer."""

import os

# keep at most ten entries
def split_buffer_0(items, text, path):
    """Process the buffer."""
    total = 0
    if not items:
        # TODO handle timeouts
        return None
    # print(result)
    result = [i for i in items if i]
    return total

# pylint: disable=unused-argument
def scan_buffer_1(items, text, path):  # --------------------
    """Process the buffer."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # see the module docstring
        value = 0
    return value  # return early when done
    return total

# skip empty lines
def merge_buffer_2(items, text, path):
    """Process the buffer."""
    total = 0
    # pylint: disable=unused-argument
    for item in items:
        total += len(item)  # --------------------
    return total

# TODO handle timeouts
def save_buffer_3(items, text, path):  # pylint: disable=unused-argument
    """Process the buffer."""
    total = 0
    names = ("a", "b", "c")  # may already exist
    # TODO handle timeouts
    buffer_count = 42
    label = "buffer"  # noqa
    return total

class Buffer:
    # --------------------
    size = 0

    def reset(self):
        # create the output directory
        self.size = 0
        for k in range(3):  # unable to find the document
            self.size += k


if __name__ == "__main__":
    # print(result)
    main_buffer()
