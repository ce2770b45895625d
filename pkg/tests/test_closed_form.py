import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from contact_cwc import (MEMBERSHIP_TOL, ContactPatch, Wrench, ZeroFriction, check_wrench,
                         face_form, tau_safe_control, wrench_map_matrix, yaw_bounds)
from contact_cwc.closed_form import (ROW_LABELS, contains_many, margins_many,
                                     yaw_bounds_many, zero_friction_face_form)

positive = st.floats(0.01, 1.0)
component = st.floats(-3, 3, allow_nan=False)


def random_wrenches(rng, patch, n):
    scale = np.array([patch.mu, patch.mu, 1, patch.Y, patch.X, patch.mu * (patch.X + patch.Y)])
    W = rng.uniform(-1, 1, (n, 6)) * scale
    W[:, 2] = rng.uniform(-0.1, 1, n)
    return W


def yaw_range_lp(patch, w):
    """Extreme admissible yaw torques with the other five components fixed."""
    G = wrench_map_matrix(patch)
    mu = patch.mu
    A_ub = []
    for i in range(4):
        for t in (0, 1):
            for s in (1, -1):
                row = np.zeros(12)
                row[3 * i + t], row[3 * i + 2] = s, -mu
                A_ub.append(row)
    bounds = [(None, None), (None, None), (0, None)] * 4
    out = []
    for sign in (1, -1):
        res = linprog(sign * G[5], A_ub=np.array(A_ub), b_ub=np.zeros(16),
                      A_eq=G[:5], b_eq=w[:5], bounds=bounds, method="highs")
        out.append(sign * res.fun if res.status == 0 else None)
    return out


class TestCheckWrench:
    def test_pure_normal_load(self, unit_patch):
        r = check_wrench(unit_patch, Wrench(0, 0, 10, 0, 0, 0))
        assert r.member and not r.violated and r.min_margin > 0

    def test_yaw_limit(self, unit_patch):
        assert not check_wrench(unit_patch, Wrench(0, 0, 10, 0, 0, 10.01)).member
        assert check_wrench(unit_patch, Wrench(0, 0, 10, 0, 0, 9.99)).member

    def test_violated_labels_name_yaw(self, unit_patch):
        r = check_wrench(unit_patch, Wrench(0, 0, 10, 0, 0, 10.01))
        assert r.violated and all(label.startswith("W6") for label in r.violated)

    def test_sliding(self, unit_patch):
        r = check_wrench(unit_patch, Wrench(6, 0, 10, 0, 0, 0))
        assert not r.member and "W1:+fx" in r.violated

    def test_boundary_flag(self, unit_patch):
        r = check_wrench(unit_patch, Wrench(5, 0, 10, 0, 0, 0))
        assert r.member and r.boundary

    def test_zero_normal_force(self, unit_patch):
        r = check_wrench(unit_patch, Wrench(0, 0, 0, 0, 0, 0))
        assert r.member and r.zmp is None
        r = check_wrench(unit_patch, Wrench(0, 0, 0, 0, 0, 1e-3))
        assert not r.member and r.weak_normal

    def test_pulling_rejected(self, unit_patch):
        assert not check_wrench(unit_patch, Wrench(0, 0, -1, 0, 0, 0)).member

    def test_frictionless_patch(self):
        p = ContactPatch(1, 1, 0)
        assert check_wrench(p, Wrench(0, 0, 1, 0.5, 0.5, 0)).member
        assert not check_wrench(p, Wrench(1e-3, 0, 1, 0, 0, 0)).member
        assert not check_wrench(p, Wrench(0, 0, 1, 0, 0, 1e-3)).member

    def test_report_dict(self, unit_patch):
        d = check_wrench(unit_patch, Wrench(0, 0, 1, 0, 0, 0)).to_dict()
        assert set(d["margins"]) == set(ROW_LABELS) and d["member"] is True


class TestFaceForm:
    def test_sixteen_rows(self):
        for p in [ContactPatch(1, 1, 0.5), ContactPatch(0.05, 0.3, 1.0), ContactPatch(2, 0.1, 0.01)]:
            f = face_form(p)
            assert f.rows.shape == (16, 6) and len(f) == 16
            assert np.allclose(np.linalg.norm(f.rows, axis=1), 1)

    def test_sliding_row(self, unit_patch):
        expected = np.array([1, 0, -0.5, 0, 0, 0]) / np.hypot(1, 0.5)
        assert np.allclose(face_form(unit_patch).rows[0], expected, atol=1e-15)

    def test_zero_friction_guard(self):
        with pytest.raises(ZeroFriction):
            face_form(ContactPatch(1, 1, 0))
        assert len(zero_friction_face_form(ContactPatch(1, 1, 0))) == 10

    def test_matches_elementwise_margins(self, rng):
        for p in [ContactPatch(1, 1, 0.5), ContactPatch(0.05, 0.3, 0.1)]:
            W = random_wrenches(rng, p, 100_000)
            f = face_form(p)
            assert np.allclose(f.margins(W), margins_many(p, W), atol=1e-12)
            assert np.array_equal(f.contains(W), contains_many(p, W))

    def test_membership_agrees_with_check_wrench(self, rng):
        p = ContactPatch(0.1, 0.3, 0.5)
        W = random_wrenches(rng, p, 300)
        f = face_form(p)
        assert [check_wrench(p, Wrench(*w)).member for w in W] == f.contains(W).tolist()


class TestYaw:
    def test_vertical_load(self, unit_patch):
        y = yaw_bounds(unit_patch, Wrench(0, 0, 10, 0, 0, 0))
        assert (y.tau_min, y.tau_max, y.tau_safe) == (-10, 10, 0)

    def test_sign_law(self, unit_patch):
        y = yaw_bounds(unit_patch, Wrench(0.3, 0, 10, 0.2, 0, 0))
        assert y.tau_safe == pytest.approx(-min(1.0 * 0.3, 0.5 * 0.2))

    def test_singleton_at_saturation(self):
        p = ContactPatch(0.2, 0.1, 0.6)
        fz = 3.0
        w = Wrench(p.mu * fz, p.mu * fz, fz, p.Y * fz, -p.X * fz, 0)
        y = yaw_bounds(p, w)
        assert abs(y.tau_max - y.tau_min) < 1e-9
        assert abs(y.tau_safe - y.tau_min) < 1e-9

    def test_control_is_midpoint(self, unit_patch, rng):
        W = random_wrenches(rng, unit_patch, 1000)
        lo, hi, safe, _ = yaw_bounds_many(unit_patch, W)
        assert np.allclose(safe, 0.5 * (lo + hi), atol=1e-12)
        assert tau_safe_control(unit_patch, Wrench(*W[0])) == pytest.approx(safe[0], abs=1e-15)

    @given(component, component, st.floats(0.1, 3), component, component, positive, positive,
           st.floats(0.05, 1.5))
    def test_safe_yaw_satisfies_yaw_rows(self, fx, fy, fz, tx, ty, X, Y, mu):
        p = ContactPatch(X, Y, mu)
        w = Wrench(fx, fy, fz, tx, ty, 0.0)
        y = yaw_bounds(p, w)
        if y.empty_range:
            return
        m = check_wrench(p, Wrench(fx, fy, fz, tx, ty, y.tau_safe)).margins
        assert m[8:].max() <= MEMBERSHIP_TOL

    def test_range_matches_lp_oracle(self, rng):
        p = ContactPatch(0.1, 0.05, 0.8)
        W = random_wrenches(rng, p, 60) * 0.7
        W[:, 2] = rng.uniform(0.2, 1, len(W))
        checked = 0
        for w in W:
            y = yaw_bounds(p, Wrench(*w))
            lo_hi = yaw_range_lp(p, w)
            if lo_hi[0] is None:
                assert check_wrench(p, Wrench(*w[:5], y.tau_safe)).member is False or y.empty_range
                continue
            lo, hi = lo_hi
            assert y.tau_max == pytest.approx(hi, abs=1e-9)
            assert y.tau_min == pytest.approx(lo, abs=1e-9)
            checked += 1
        assert checked > 20
