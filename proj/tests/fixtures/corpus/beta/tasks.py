import os


# Create the output directory.
def prepare(path):
    os.makedirs(path)  # may already exist
    # TODO handle permissions


def cleanup(path):
    # Remove the temporary file.
    os.remove(path)
