import hashlib
import json
import time


def generate_md5(text: str) -> str:
    """Hex md5 of a UTF-8 string; used for code and configuration digests."""
    return hashlib.md5(text.encode("utf-8")).hexdigest()


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def digest_payload(payload) -> str:
    """md5 of the canonical JSON rendering of a payload."""
    return generate_md5(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def get_nested_field(config, *keys, default=None):
    """
    Walk nested config mappings, e.g. get_nested_field(config, "design", "enumeration_cap").

    Returns `default` as soon as a level is missing or is not a mapping.
    """
    current = config
    for key in keys:
        if not isinstance(current, dict) or key not in current:
            return default
        current = current[key]
    return current


def format_side_info(S) -> str:
    """Render a 1-based side information set, e.g. (1, 2) -> '{1,2}'."""
    return "{" + ",".join(str(k) for k in S) + "}"


def print_status(status_type, status_message):
    current_time = time.strftime("%H:%M:%S")
    print(f"🕒 {status_type:<25}: {status_message:<15} ({current_time})")
