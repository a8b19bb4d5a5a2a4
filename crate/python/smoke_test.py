"""Smoke test for the Python extension.

Builds the cdylib with cargo, loads it as `moduli` and exercises the main entry points.
Pass a path to a prebuilt shared library to skip the build.
"""

import importlib.util
import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(lib_path=None):
    if lib_path is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "moduli-python"],
            cwd=ROOT,
            check=True,
        )
        lib_path = ROOT / "target" / "release" / "libmoduli.so"
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / "moduli.so"
    shutil.copy(lib_path, target)
    found = importlib.util.spec_from_file_location("moduli", target)
    module = importlib.util.module_from_spec(found)
    found.loader.exec_module(module)
    return module


def main():
    m = load(sys.argv[1] if len(sys.argv) > 1 else None)

    f = m.MoebiusMap(1, 1, 0, 1)
    g = m.MoebiusMap(1, 0, complex(0.5, math.sqrt(3) / 2), 1)
    ch = m.character_of(f, g)
    assert abs(ch.gamma - complex(-0.5, math.sqrt(3) / 2)) < 1e-12, ch
    assert ch.beta == 0 and ch.beta_tilde == 0
    assert m.character_of(m.MoebiusMap.identity(), m.MoebiusMap.identity()).gamma == 0

    assert m.MoebiusMap(0, -1, 1, 1).classify() == {"kind": "EllipticRational", "k": 1, "p": 3}
    try:
        m.MoebiusMap(1, 2, 2, 4)
    except ValueError as e:
        assert "singular" in str(e)
    else:
        raise AssertionError("singular matrix accepted")

    report = m.discreteness_filter(0.3, 0.2)
    assert report["verdict"] == "NotKleinian", report
    report = m.discreteness_filter(-2, -3, -4)
    assert report["verdict"] == "ElementaryMatch", report

    a, b = m.zext_characters(-2, -3)
    assert b.matches(m.PrincipalCharacter(-1, -3, -4))
    assert m.subgroup_character(-2, -3).matches(m.PrincipalCharacter(-2, -3, -3))
    assert abs(m.regenerate_table_entry(2, 3, 2 / 3, 1, 1).gamma + 2) < 1e-12

    rf, rg = m.realize(complex(1.5, -2), complex(-0.3, 0.7))
    back = m.character_of(rf, rg)
    assert abs(back.gamma - complex(1.5, -2)) < 1e-9 and abs(back.beta_tilde + 4) < 1e-9

    cert = m.semigroup_search(0.5, 0)
    assert cert is not None and cert["word"] == "P", cert
    orbit = m.iterate(0.5, 0, "P")
    assert orbit["outcome"] == "ConvergedToZero"

    d = m.complex_distance(-2, -3, -4)
    assert abs(d.real) < 1e-12

    cfg = m.Config(threads=1)
    pgm = m.scan_pgm(0, (-3, 3, -3, 3), 16, 16, cfg)
    assert pgm.startswith(b"P5\n16 16\n255\n") and len(pgm) == 13 + 256
    assert pgm == m.scan_pgm(0, (-3, 3, -3, 3), 16, 16, m.Config(threads=2))

    entries = m.exceptional_tables(10)
    assert any(e["group_name"] == "A4" for e in entries)
    pt = m.dehn_surgery_point(50)
    assert pt["relator_residual"] < 1e-9
    assert abs(abs(m.dehn_gamma_limit()) - 1) < 1e-12

    print("python smoke test passed")


if __name__ == "__main__":
    main()
