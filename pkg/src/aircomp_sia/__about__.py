TOOL_NAME = "aircomp-sia"
__version__ = "0.1.0"
