import numpy as np
import pytest

from approxdct.errors import PGMDepthError, PGMError, PGMHeaderError, PGMTruncatedError
from approxdct.pgm import encode_pgm, parse_pgm, read_pgm, write_pgm


def test_round_trip(tmp_path, rng):
    img = rng.integers(0, 256, size=(16, 24), dtype=np.uint8)
    path = tmp_path / "a.pgm"
    write_pgm(img, path)
    back = read_pgm(path)
    assert back.shape == (16, 24)
    assert np.array_equal(back, img)
    assert path.read_bytes() == encode_pgm(back)


def test_minimal_file():
    data = b"P5 8 8 255\n" + bytes(range(64))
    a = parse_pgm(data)
    assert a.shape == (8, 8)
    assert a[7, 7] == 63


def test_comments_in_header():
    data = b"P5\n# made by hand\n2 1 # width height\n255\n\x01\x02"
    assert parse_pgm(data).tolist() == [[1, 2]]


def test_payload_starting_with_whitespace_byte():
    # the sample value 10 is a newline; only one separator byte is skipped
    assert parse_pgm(b"P5 2 1 255\n\n\n").tolist() == [[10, 10]]


def test_sixteen_bit_rejected():
    with pytest.raises(PGMDepthError):
        parse_pgm(b"P5 8 8 65535\n" + bytes(128))


@pytest.mark.parametrize(
    "data, err",
    [
        (b"P2 8 8 255\n" + bytes(64), PGMHeaderError),
        (b"P5 8 8", PGMHeaderError),
        (b"P5 x 8 255\n" + bytes(64), PGMHeaderError),
        (b"P5 0 8 255\n", PGMHeaderError),
        (b"P5 8 8 255\n" + bytes(10), PGMTruncatedError),
    ],
)
def test_malformed(data, err):
    with pytest.raises(err):
        parse_pgm(data)
    assert issubclass(err, PGMError)


def test_encode_rejects_bad_samples():
    with pytest.raises(ValueError):
        encode_pgm(np.full((2, 2), 300))
    with pytest.raises(ValueError):
        encode_pgm(np.zeros(4))
