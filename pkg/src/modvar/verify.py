"""Named verification suites run by ``modvar verify``.

Each check returns a plain dict so the CLI can serialise it directly.
Quadrature inside the checks uses the default tolerance, which honours
MODVAR_TOL; an unattainable override makes the quadrature-backed checks
fail rather than crash the run.
"""

from __future__ import annotations

import math

import numpy as np

from . import gridlab, identities, moments
from .aperture import SlitConfig, f_m, f_m_squared
from .errors import ModvarError


def _check(suite, name, passed, detail, **extra):
    return {"suite": suite, "name": name, "passed": bool(passed), "detail": detail, **extra}


def _report(suite, rep: identities.IdentityReport):
    return _check(suite, rep.name, rep.passed,
                  f"max deviation {rep.max_abs_deviation:.3g} <= {rep.tolerance:.3g}",
                  **{k: v for k, v in rep.as_dict().items() if k not in ("name", "passed")})


def suite_product_sum():
    out = [_report("product-sum", identities.check_product_sum(d)) for d in range(1, 7)]
    coeffs = identities.product_form_coefficients(4)
    want = np.array([1.0 if n % 2 else 0.0 for n in range(coeffs.size)])
    dev = float(np.max(np.abs(coeffs - want)))
    out.append(_check("product-sum", "fourier coefficients d=4", dev <= 1e-10,
                      f"max |c_n - {{0,1}}| = {dev:.3g} <= 1e-10", max_abs_deviation=dev))
    return out


def suite_dirichlet():
    out = [_report("dirichlet", identities.check_dirichlet(m)) for m in (2, 4, 8, 40)]
    kappa = np.linspace(-math.pi, math.pi, 4001)
    for m in (8, 200):
        dev = float(np.max(np.abs(f_m_squared(m, kappa) - f_m(m, kappa) ** 2)) / (m * m / 4))
        out.append(_check("dirichlet", f"closed-form f_m^2 m={m}", dev <= 1e-12,
                          f"relative deviation {dev:.3g} <= 1e-12", max_abs_deviation=dev))
    return out


def suite_sinc_comb():
    a, T = 1.0, 5.0
    vals = [identities.sinc_comb_partial(a, T, u, 10**5) for u in (0.0, 0.3, 1.2)]
    dev = max(abs(v - T / a) for v in vals)
    slope = identities.sinc_comb_tail_exponent(a, T, 0.3)
    return [
        _check("sinc-comb", "series -> T/a at J=1e5", dev <= 1e-3,
               f"max |S - T/a| = {dev:.3g} <= 1e-3 over u in {{0, 0.3, 1.2}}",
               max_abs_deviation=dev),
        _check("sinc-comb", "O(1/J) tail", abs(slope + 1) <= 0.1,
               f"log-log slope {slope:.4f}, expected -1 +- 0.1", value=slope),
    ]


def suite_convolution():
    return [_report("convolution", identities.convolution_construction(d, T=5.0).report)
            for d in range(1, 7)]


def suite_integrals():
    fi = identities.fringe_integral_exact()
    d1 = abs(fi.dirichlet.value - fi.dirichlet_exact)
    d2 = abs(fi.cosine.value - fi.cosine_exact)
    rl = identities.riemann_lebesgue(200)
    return [
        _check("integrals", "pi ln 2", d1 <= 1e-10, f"|quad - pi ln 2| = {d1:.3g} <= 1e-10",
               value=fi.dirichlet.value),
        _check("integrals", "(pi/24)(pi^2-6)", d2 <= 1e-10,
               f"|quad - exact| = {d2:.3g} <= 1e-10", value=fi.cosine.value),
        _check("integrals", "Riemann-Lebesgue m=200", abs(rl.value) < 0.01,
               f"|value| = {abs(rl.value):.3g} < 0.01", value=rl.value),
    ]


def suite_moments():
    T = 5.0
    out = []
    cfg = SlitConfig(1.0, T, 2)
    exact = 0.5 * moments.SQRT_BOX
    qt = moments.sdev_qt(cfg).value
    sf = qt * moments.sdev_pmod_single_fringe(cfg).value
    bf = qt * moments.sdev_pmod_bruteforce(cfg).value
    out.append(_check("moments", "double-slit product", max(abs(sf - exact), abs(bf - exact)) <= 1e-6,
                      f"single-fringe {sf:.9f}, brute force {bf:.9f}, exact {exact:.9f}",
                      value=sf))
    vals = [moments.sdev_pmod_bruteforce(SlitConfig(f * T, T, 2)).value for f in (0.1, 0.5, 0.9)]
    spread = (max(vals) - min(vals)) / min(vals)
    out.append(_check("moments", "slit-width independence", spread <= 1e-6,
                      f"relative spread {spread:.3g} <= 1e-6", value=spread))
    worst = 0.0
    for m in range(2, 65, 2):
        c = SlitConfig(1.0, T, m)
        worst = max(worst, abs(moments.sdev_pmod_refined_quadrature(c).value
                               - moments.sdev_pmod_refined(c).value))
    out.append(_check("moments", "refined routes m<=64", worst <= 1e-8,
                      f"max |quad - closed| = {worst:.3g} <= 1e-8", max_abs_deviation=worst))
    lowest = math.inf
    for Tv in (1.0, 5.0, 10.0):
        for r in moments.sweep(Tv, 0.5 * Tv, range(2, 201, 2)):
            lowest = min(lowest, r.product, r.product_refined)
    out.append(_check("moments", "Robertson bound", lowest >= 0.5 - 1e-9,
                      f"smallest product {lowest:.9f} >= 1/2", value=lowest))
    c200 = moments.sdev_pmod_single_fringe(SlitConfig(1.0, T, 200)).value * math.sqrt(200)
    rel = abs(c200 / moments.asymptotic_prefactor(T) - 1)
    out.append(_check("moments", "asymptotic prefactor m=200", rel <= 0.03,
                      f"relative gap to 2 sqrt(ln 2)/T: {rel:.3g} <= 0.03", value=c200))
    dq = max(abs(moments.sdev_qt_discrete(SlitConfig(1.0, T, m)) - moments.sdev_qt(SlitConfig(1.0, T, m)).value)
             for m in (2, 4, 8, 16))
    out.append(_check("moments", "Delta(Q_T) discrete vs closed", dq <= 1e-12,
                      f"max deviation {dq:.3g} <= 1e-12", max_abs_deviation=dq))
    return out


def suite_commutator():
    T, a = 5.0, 1.0
    out = []
    for m in (2, 4, 8):
        cfg = SlitConfig(a, T, m)
        st = gridlab.sample_momentum(cfg, *gridlab.commensurate_grid(cfg.K, 256, 100))
        r = gridlab.canonical_residual(st, cfg.K)
        out.append(_check("commutator", f"psi_{m} admissible", r.l2_residual <= 1e-3,
                          f"relative residual {r.l2_residual:.3g} <= 1e-3", value=r.l2_residual))
    cfg = SlitConfig.single_slit(a, T)
    st = gridlab.sample_momentum(cfg, *gridlab.commensurate_grid(cfg.K, 256, 100))
    r = gridlab.canonical_residual(st, cfg.K)
    ok = r.l2_residual >= 0.1 and r.comb_alignment_score >= 0.9
    out.append(_check("commutator", "single slit comb", ok,
                      f"residual {r.l2_residual:.3g} >= 0.1, alignment {r.comb_alignment_score:.4f} >= 0.9",
                      value=r.l2_residual))
    return out


def suite_commuting():
    cfg = SlitConfig(1.0, 5.0, 2)
    coarse = gridlab.commuting_residual(cfg, 16, 2**14)
    fine = gridlab.commuting_residual(cfg, 16, 2**16)
    contrast = gridlab.commuting_residual(cfg, 16, 2**14, contrast=True)
    return [
        _check("commuting", "[Q_mod, P_mod] = 0", max(coarse, fine) <= 1e-2 and fine <= max(coarse, 1e-14),
               f"residual {coarse:.3g} (n=2^14), {fine:.3g} (n=2^16)", value=fine),
        _check("commuting", "[Q, P_mod] != 0", contrast > 0.1,
               f"contrast residual {contrast:.3g} > 0.1", value=contrast),
    ]


SUITES = {
    "product-sum": suite_product_sum,
    "dirichlet": suite_dirichlet,
    "sinc-comb": suite_sinc_comb,
    "convolution": suite_convolution,
    "integrals": suite_integrals,
    "moments": suite_moments,
    "commutator": suite_commutator,
    "commuting": suite_commuting,
}


def run_suites(names):
    results = []
    for name in names:
        try:
            results.extend(SUITES[name]())
        except (ModvarError, ArithmeticError, ValueError) as exc:
            results.append(_check(name, f"{name} suite", False, f"{type(exc).__name__}: {exc}"))
    return results
