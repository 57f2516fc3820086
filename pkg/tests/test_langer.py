import math

import pytest

from leakydisk import langer
from leakydisk.potential import PotentialSpec

import oracles


class TestZetaOf:
    def test_turning_point(self):
        v = langer.zeta_of(1.0)
        assert abs(v.zeta) <= 1e-14
        assert v.branch == "turning"
        assert v.dzeta_dz == pytest.approx(-(2.0 ** (1.0 / 3.0)), abs=1e-12)

    def test_closed_form_values(self):
        # frozen from the independent closed-form oracle
        v2 = langer.zeta_of(2.0)
        assert v2.zeta.real == pytest.approx(oracles.zeta_closed_form(2.0), abs=1e-12)
        assert v2.zeta.real == pytest.approx(-1.0181048886, abs=1e-9)
        v_half = langer.zeta_of(0.5)
        assert v_half.zeta.real == pytest.approx(oracles.zeta_closed_form(0.5), abs=1e-12)
        assert v_half.zeta.real == pytest.approx(0.77055184, abs=1e-7)

    def test_ode_oracle_near_turning(self):
        # numerical integration of the defining ODE from z = 2 inward
        for z in [1.8, 1.4, 1.1, 1.03]:
            ref = oracles.zeta_by_ode(z)
            assert langer.zeta_of(z).zeta.real == pytest.approx(ref, abs=5e-9)

    def test_ode_residual_grid(self):
        # (zeta')^2 zeta z^2 = 1 - z^2 across branches and the seam
        count = 0
        for i in range(500):
            z = complex(0.1 + 2.9 * i / 499, 0.3 * math.sin(7.0 * i))
            if abs(z.imag) > 0.5:
                continue
            v = langer.zeta_of(z)
            resid = abs(v.dzeta_dz**2 * v.zeta * z * z - (1.0 - z * z))
            assert resid <= 1e-8 * (1.0 + abs(z) ** 2)
            count += 1
        assert count > 400

    def test_derivative_vs_finite_difference(self):
        for z in [0.6, 0.96 + 0.02j, 1.0 + 0.04j, 1.04, 1.7 - 0.1j]:
            v = langer.zeta_of(z)
            h = 1e-6
            fd = (langer.zeta_of(z + h).zeta - langer.zeta_of(z - h).zeta) / (2 * h)
            assert abs(v.dzeta_dz - fd) <= 1e-7 * (1 + abs(fd))

    def test_seam_agreement(self):
        # series and closed form branches agree to 1e-9 at the same points
        from leakydisk.langer import _series_eval

        for dz in [0.05, 0.0499, 0.045]:
            for sgn in (+1, -1):
                for im in (0.0, 0.01, -0.02):
                    z = complex(1.0 + sgn * dz, im)
                    if abs(z - 1.0) > 0.05:
                        continue
                    ser, _ = _series_eval(1.0 - z)
                    # closed-form branch reproduced directly
                    import cmath

                    if z.real >= 1.0:
                        s_ = cmath.sqrt(z * z - 1.0)
                        x = s_ - cmath.acos(1.0 / z)
                        ref = -(((1.5 * x) ** (1.0 / 3.0)) ** 2)
                    else:
                        s_ = cmath.sqrt(1.0 - z * z)
                        y = cmath.log((1.0 + s_) / z) - s_
                        ref = ((1.5 * y) ** (1.0 / 3.0)) ** 2
                    assert abs(ser - ref) <= 1e-9 * (1 + abs(ref))

    def test_monotone_real_axis(self):
        zs = [0.06 + 0.03 * k for k in range(95)]
        vals = [langer.zeta_of(z).zeta for z in zs]
        assert all(abs(v.imag) < 1e-12 for v in vals)
        assert all(a.real > b.real for a, b in zip(vals, vals[1:]))
        # sign change exactly at z = 1
        for z, v in zip(zs, vals):
            assert (v.real > 0) == (z < 1.0)

    def test_domain(self):
        with pytest.raises(langer.LangerDomainError):
            langer.zeta_of(0.01)
        with pytest.raises(langer.LangerDomainError):
            langer.zeta_of(1.0 + 0.8j)


class TestInverse:
    def test_turning(self):
        assert langer.z_of_zeta(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_round_trip_value(self):
        w = langer.z_of_zeta(-1.018104888567116 + 0j)
        assert w == pytest.approx(2.0, abs=1e-6)

    def test_small_zeta_linearization(self):
        w = langer.z_of_zeta(0.01)
        assert w.real == pytest.approx(1.0 - 0.01 / 2 ** (1.0 / 3.0), abs=1e-4)

    def test_round_trip_grid(self):
        for k in range(29):
            z = 0.7 + 0.025 * k
            for im in (0.0, 0.05, -0.05):
                zz = complex(z, im)
                zeta = langer.zeta_of(zz).zeta
                if abs(zeta) > 0.5:
                    continue
                back = langer.z_of_zeta(zeta)
                assert abs(back - zz) <= 1e-8 * (1 + abs(zz))

    def test_domain(self):
        with pytest.raises(langer.LangerDomainError):
            langer.z_of_zeta(1.2)


class TestPhi:
    def test_glancing_limit(self):
        # zeta/(1 - w^2) -> 2^{-2/3} as w -> 1
        assert langer.zeta_ratio(1.0) == pytest.approx(2.0 ** (-2.0 / 3.0), abs=1e-12)
        assert langer.zeta_ratio(1.0 + 1e-4) == pytest.approx(2.0 ** (-2.0 / 3.0), rel=1e-3)

    def test_alpha_two_thirds_h_independent(self):
        pot = PotentialSpec(V0=1.0, alpha=2.0 / 3.0)
        vals = []
        for n in [100, 400, 1600]:
            h = 1.0 / n
            vals.append(langer.phi(n, h, pot, 1.0 + 0j).phi)
        assert vals[0] == pytest.approx(vals[1], rel=1e-12)
        assert vals[1] == pytest.approx(vals[2], rel=1e-12)

    def test_linear_in_v0(self):
        a = langer.phi(200, 1 / 200, PotentialSpec(1.0, 0.5), 1.0 + 0j).phi
        b = langer.phi(200, 1 / 200, PotentialSpec(2.0, 0.5), 1.0 + 0j).phi
        assert b == pytest.approx(2.0 * a, rel=1e-14)

    def test_magnitude_scale(self):
        pot = PotentialSpec(V0=1.3, alpha=0.9)
        n = 500
        h = 1.0 / n
        val = langer.phi(n, h, pot, 1.0 + 0j).phi
        assert abs(val) == pytest.approx(langer.expected_phi_scale(n, h, pot), rel=1e-10)

    def test_precondition(self):
        with pytest.raises(langer.LangerDomainError):
            langer.phi(10, 1.0, PotentialSpec(1.0, 0.0), 1.0)
