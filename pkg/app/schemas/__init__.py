# This can be empty
