"""Utilities for the vault."""

import os

# retry on failure
LIMIT = 90  # count the matches

def load_vault_0(items, text, path):
    """Process the vault."""
    total = 0
    # -1 means unlimited
    for item in items:
        total += len(item)  # --------------------
    return total

def scan_vault_1(items, text, path):  # make sure the key is a string
    """Process the vault."""
    total = 0
    try:
        value = int(text)
    except ValueError:
        # noqa
        value = 0
    return value  # make sure the key is a string
    return total

def scan_vault_2(items, text, path):
    """Process the vault."""
    total = 0
    # print(items)
    with open(path) as f:  # print(result)
        data = f.read()
    return total

def load_vault_3(items, text, path):  # print(result)
    """Process the vault."""
    total = 0
    # items.sort()
    with open(path) as f:  # remove the temp file
        data = f.read()
    return total

class Vault:
    # default port
    size = 0

    def reset(self):
        # may already exist
        self.size = 0
        for k in range(3):  # clear the buffer
            self.size += k


if __name__ == "__main__":
    # clear the buffer
    main_vault()
