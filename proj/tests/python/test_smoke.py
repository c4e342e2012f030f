"""Smoke checks of the python bindings: catalog access, a full build,
a verification pass, and the closed chain forms."""

import math

import qeskit as qk


def main():
    assert qk.schema_version == 1

    names = qk.catalog_names()
    assert names == ["case1", "case2", "case3", "oscillator", "rosen_morse", "razavy"], names

    d = qk.catalog_defaults("case3")
    assert d == {"b": 1.0, "eps1": 1.0}, d

    val = qk.evaluate_expression("4*e*x^2", 2.0, {"e": 1.0})
    assert abs(val - 16.0) < 1e-12, val

    m = qk.build(catalog="case2")
    assert m["bound_states"] == 3
    assert abs(m["energies"][0]) < 1e-12
    assert abs(m["energies"][1] - 1.5) < 1e-9
    assert abs(m["energies"][2] - 2.0) < 1e-9
    assert len(m["x"]) == len(m["v"]) == len(m["psi0"]) == m["points"]
    assert all(math.isfinite(v) for v in m["v"])

    # the same well through the expression route
    e = qk.build(expression="4*e*e1*x^2", params={"e": 1.0, "e1": 1.0},
                 epsilon=1.0, epsilon1=1.0)
    assert abs(e["energies"][1] - 1.0) < 1e-9
    assert abs(e["energies"][2] - 2.0) < 1e-9

    # reduced bound-state regime of the saturating well
    r2 = qk.build(catalog="case3", params={"eps1": -0.1})
    assert r2["bound_states"] == 2
    assert r2["psi2"] == []
    assert r2["continuum_edge"] is not None

    rep = qk.verify(catalog="case2")
    assert rep["pass"] is True
    assert len(rep["level_checks"]) == 3
    assert all(c["pass"] for c in rep["level_checks"])
    assert max(rep["residuals"]) < 1e-5

    # closed chain forms: first widening of the harmonic well at the origin
    v1 = qk.oscillator_chain_potential(1, 1.0, 0.0)
    assert abs(v1 + 2.5) < 1e-12, v1  # 4e - 8e + 3e/2 at eps = 1
    vb = qk.oscillator_base_potential(1, 1.0, 0.0)
    assert abs(vb - 1.5) < 1e-12, vb

    s, p = qk.morse_chain_potential(1, 3.0, 0.0)
    assert math.isfinite(s) and math.isfinite(p)
    common = (1.0 + 2.0 * 3.0) ** 2 / 8.0
    assert abs(p - (common + (1.0 - 2.0 * (3.0 - 2.0)) / 2.0)) < 1e-12, p

    try:
        qk.build(catalog="case2", expression="x^2")
        raise AssertionError("expected a ValueError for two sources")
    except ValueError:
        pass

    print("python smoke ok")


if __name__ == "__main__":
    main()
