import csv
import json
import math

import numpy as np
import pytest

from latticedex.codec import (Message, build_index_code, code_to_dict, crt_idempotents, decode_point, encode,
                              encode_representative, lattice_min_norm, load_code, rate, save_code, subcode_points,
                              verify_isomorphism, write_points_csv)
from latticedex.errors import CorruptCodeFileError, InvalidArgumentError, InvalidDesignError, TooLargeError
from latticedex.numberfield import (make_cyclotomic_field, make_maximal_real_field, make_quadratic_field,
                                    prime_ideals_above)


def test_code_sizes_and_alphabets(example1_code, example2_code, example3_code):
    assert (example1_code.size, example1_code.alphabet_sizes) == (55, (5, 11))
    assert (example2_code.size, example2_code.alphabet_sizes) == (49, (7, 7))
    assert (example3_code.size, example3_code.alphabet_sizes) == (77, (7, 11))


def test_crt_idempotents(example1_code):
    field = example1_code.field
    primes = example1_code.primes
    for k, e in enumerate(crt_idempotents(primes)):
        for j, prime in enumerate(primes):
            target = e - field.one() if j == k else e
            assert prime.contains(target)


def test_single_prime_idempotent_is_one():
    field = make_quadratic_field(-7)
    prime = prime_ideals_above(field, 11)[0]
    assert crt_idempotents([prime])[0].tolist() == [1, 0]


def test_constellation_has_unit_average_energy(example2_code):
    assert np.mean(np.sum(example2_code.points ** 2, axis=1)) == pytest.approx(1.0)


def test_representatives_are_minimum_energy_per_coset(example3_code):
    code = example3_code
    field = code.field
    axis = np.arange(-12, 13)
    grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    energies = field.energy(grid)
    cosets = code.modulus.residue_index(grid)
    best = np.full(code.modulus.norm, np.iinfo(np.int64).max)
    np.minimum.at(best, cosets, energies)

    code_cosets = code.modulus.residue_index(code.representatives)
    assert np.array_equal(code.energies, best[code_cosets])


def test_zero_message_maps_to_origin(example1_code):
    assert np.all(encode_representative(example1_code, Message.zero(example1_code)) == 0)
    assert np.allclose(encode(example1_code, Message.zero(example1_code)), 0)


def test_decode_recovers_message_from_any_coset_member(example3_code):
    code = example3_code
    field = code.field
    shift = code.modulus.hnf @ np.array([3, -2])
    for labels in [(0, 0), (3, 5), (6, 10), (1, 7)]:
        msg = Message.from_labels(code, labels)
        x = encode_representative(code, msg)
        assert decode_point(code, x) == msg
        assert decode_point(code, field.add(x, shift)) == msg


def test_message_labels_reject_non_canonical_residues(example3_code):
    zero = Message.zero(example3_code)
    bad = Message(((9, 0),) + zero.residues[1:])
    with pytest.raises(InvalidArgumentError):
        bad.labels(example3_code)
    with pytest.raises(InvalidArgumentError):
        Message.from_labels(example3_code, (7, 0))


def test_subcode_points_lie_in_the_side_information_ideal(example3_code):
    code = example3_code
    assert len(subcode_points(code, (1,))) == 11
    assert len(subcode_points(code, (2,))) == 7
    assert len(subcode_points(code, (1, 2))) == 1
    members = code.representatives[code.subcode_indices((1,))]
    assert np.all(code.primes[0].contains(members))

    fixed = Message.from_labels(code, (4, 0))
    shifted = code.representatives[code.subcode_indices((1,), fixed.labels(code))]
    assert len(shifted) == 11
    assert np.all(code.primes[0].contains(shifted - code.representatives[code.message_index((4, 0))]))


def test_rate(example3_code):
    assert rate(example3_code, (1,)) == pytest.approx(math.log2(7) / 2)
    assert rate(example3_code, (1, 2)) == pytest.approx(math.log2(77) / 2)
    assert rate(example3_code, ()) == 0


def test_side_information_indices_are_one_based(example3_code):
    with pytest.raises(InvalidArgumentError):
        example3_code.subcode_indices((0,))
    with pytest.raises(InvalidArgumentError):
        example3_code.subcode_indices((3,))


def test_build_rejects_repeated_prime():
    field = make_quadratic_field(-5)
    prime = prime_ideals_above(field, 7)[0]
    with pytest.raises(InvalidDesignError):
        build_index_code(field, [prime, prime])


def test_build_rejects_prime_from_another_field():
    prime = prime_ideals_above(make_quadratic_field(-5), 7)[0]
    with pytest.raises(InvalidDesignError):
        build_index_code(make_quadratic_field(-7), [prime])


def test_build_enforces_enumeration_cap():
    field = make_quadratic_field(-5)
    with pytest.raises(TooLargeError):
        build_index_code(field, prime_ideals_above(field, 7), enumeration_cap=48)


def test_sublattice_minimum(example3_code):
    code = example3_code
    # the product ideal is principal with generator of norm 77
    assert lattice_min_norm(code.gram, code.side_lattice_basis((1, 2)), code.gram_scale) == 77
    assert lattice_min_norm(code.gram, np.eye(2, dtype=np.int64), code.gram_scale) == 1


@pytest.mark.parametrize("code_fixture", ["example1_code", "example2_code", "example3_code"])
def test_crt_map_is_a_ring_isomorphism(code_fixture, request):
    report = verify_isomorphism(request.getfixturevalue(code_fixture))
    assert report.passed
    assert report.exhaustive


def test_preset_sized_codes_are_isomorphisms():
    field = make_maximal_real_field(7)
    maxreal = build_index_code(field, prime_ideals_above(field, 13))
    assert maxreal.size == 13 ** 3
    assert verify_isomorphism(maxreal).passed

    field = make_cyclotomic_field(5)
    cyclo = build_index_code(field, prime_ideals_above(field, 11))
    report = verify_isomorphism(cyclo)
    assert report.passed
    assert not report.exhaustive


def test_save_is_byte_stable_and_round_trips(example2_code, tmp_path):
    first = tmp_path / "a.code.json"
    second = tmp_path / "b.code.json"
    save_code(example2_code, str(first))
    save_code(example2_code, str(second))
    assert first.read_bytes() == second.read_bytes()

    restored = load_code(str(first))
    assert restored.digest() == example2_code.digest()
    assert np.array_equal(restored.representatives, example2_code.representatives)
    assert [p.label for p in restored.primes] == [p.label for p in example2_code.primes]


def test_load_rejects_tampered_points(example3_code, tmp_path):
    payload = code_to_dict(example3_code)
    payload["points"][5]["coords"] = payload["points"][6]["coords"]
    path = tmp_path / "tampered.code.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(CorruptCodeFileError):
        load_code(str(path))


def test_load_rejects_bad_files(tmp_path):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    with pytest.raises(CorruptCodeFileError):
        load_code(str(garbage))

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(CorruptCodeFileError):
        load_code(str(wrong))

    with pytest.raises(CorruptCodeFileError):
        load_code(str(tmp_path / "missing.json"))


def test_points_csv(example1_code, tmp_path):
    path = tmp_path / "points.csv"
    write_points_csv(example1_code, str(path))
    with open(path, newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0] == ["message", "w1", "w2", "c0", "c1", "x0", "x1", "in_S1", "in_S2"]
    assert len(rows) == 56
    assert sum(int(row[7]) for row in rows[1:]) == 11
