from latticedex.util import digest_payload, format_side_info, generate_md5, get_nested_field


def test_generate_md5():
    assert generate_md5("") == "d41d8cd98f00b204e9800998ecf8427e"
    assert generate_md5("lattice") != generate_md5("lattices")


def test_digest_ignores_key_order():
    assert digest_payload({"a": 1, "b": [1, 2]}) == digest_payload({"b": [1, 2], "a": 1})


def test_get_nested_field():
    config = {"design": {"enumeration_cap": 5000}, "output": "results"}
    assert get_nested_field(config, "design", "enumeration_cap") == 5000
    assert get_nested_field(config, "design", "energy_radius_factor") is None
    assert get_nested_field(config, "output", "directory", default="out") == "out"
    assert get_nested_field(None, "design") is None


def test_format_side_info():
    assert format_side_info((1, 2)) == "{1,2}"
    assert format_side_info(()) == "{}"
