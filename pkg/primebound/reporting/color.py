import sys


class Color:
    PURPLE = "\033[95m"
    CYAN = "\033[96m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    BOLD = "\033[1m"
    END = "\033[0m"

    @staticmethod
    def enabled(stream=None):
        stream = sys.stderr if stream is None else stream
        return hasattr(stream, "isatty") and stream.isatty()

    @classmethod
    def paint(cls, text, color, stream=None):
        if not cls.enabled(stream):
            return text
        return "{}{}{}".format(color, text, cls.END)
