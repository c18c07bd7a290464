from typing import List, Dict


def list_classes() -> Dict[str, List[str]]:
    return {
        "seppl.io.Reader": [
            "wcnet.reader",
        ],
        "seppl.io.Filter": [
            "wcnet.filter",
        ],
        "seppl.io.Writer": [
            "wcnet.writer",
        ],
    }
