
# This can be empty
