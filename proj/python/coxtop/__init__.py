import json

from ._coxtop import (
    Braid,
    Element,
    Error,
    System,
    __version__,
    certify_word_poset,
    check_bistratified,
    check_deletion_apparatus,
    check_down_contractible,
    check_strong_composability,
    explain,
    presets,
    run_json,
    word_poset_size,
)


def run(config_text=""):
    """Run the verifier on a config (key = value lines) and return the report as a dict."""
    return json.loads(run_json(config_text))
