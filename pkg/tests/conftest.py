import os

import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--corpus",
        default=os.environ.get("APPROXDCT_CORPUS"),
        help="manifest of PGM images for corpus-dependent checks",
    )


@pytest.fixture(scope="session")
def corpus_manifest(request):
    path = request.config.getoption("--corpus")
    if not path:
        pytest.skip("no image corpus supplied (--corpus or APPROXDCT_CORPUS)")
    return path


def smooth_image(seed, shape=(64, 64), rho=0.95):
    """Greyscale raster with AR(1)-like correlation along both axes."""
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=shape)
    img = np.empty(shape)
    img[0] = noise[0]
    for i in range(1, shape[0]):
        img[i] = rho * img[i - 1] + np.sqrt(1 - rho**2) * noise[i]
    for j in range(1, shape[1]):
        img[:, j] = rho * img[:, j - 1] + np.sqrt(1 - rho**2) * img[:, j]
    img = 128 + 40 * img
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


@pytest.fixture(scope="session")
def synthetic_corpus():
    return [smooth_image(s) for s in range(4)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def pgm_manifest(tmp_path, synthetic_corpus):
    from approxdct.pgm import write_pgm

    lines = []
    for i, img in enumerate(synthetic_corpus[:2]):
        name = f"img{i}.pgm"
        write_pgm(img, tmp_path / name)
        lines.append(name)
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the outcome is printed in the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, text, ok):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
