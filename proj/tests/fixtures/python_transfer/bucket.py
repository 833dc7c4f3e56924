"""Utilities for the bucket."""

import os

# pylint: disable=unused-argument
LIMIT = 69  # x = compute()

# default port
def load_bucket_0(items, text, path):
    """Process the bucket."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # should never happen
        value = 0
    return value  # should never happen
    return total

# copy the list
def merge_bucket_1(items, text, path):
    """Process the bucket."""
    total = 0
    if not items:
        # the caller owns the result
        return None
    # make sure the key is a string
    result = [i for i in items if i]
    return total

def merge_bucket_2(items, text, path):  # may already exist
    """Process the bucket."""
    total = 0
    # x = 1
    with open(path) as f:  # default port
        data = f.read()
    return total

class Bucket:
    # count the matches
    size = 0

    def reset(self):
        # -1 means unlimited
        self.size = 0
        for k in range(3):  # remove the temp file
            self.size += k


if __name__ == "__main__":
    # FIXME slow for large inputs
    main_bucket()
