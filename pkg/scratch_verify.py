"""Exploratory verification of paper facts before freezing tests."""
import numpy as np

from lindblad_pc import (
    assemble, builtin, classify, commutator, compare, default_sample_times,
    fedorov_residual, gamma_operator, generator_at, integral_at,
    minimal_poly_degree, ode_oracle, partial_subspace, phase_state,
    propagate_closed_form, vec, null_space,
)

np.set_printoptions(precision=3, suppress=True, linewidth=120)

print("=== v3: functional commutativity ===")
g = assemble(builtin("v3", {"eps1": 1, "eps3": 2}))
comps = [g.drift] + [p.matrix for p in g.parts]
for i in range(len(comps)):
    for j in range(i + 1, len(comps)):
        print(f"  ||[c{i},c{j}]|| =", np.linalg.norm(commutator(comps[i], comps[j])))
for (t, s) in [(0.3, 1.7), (1.0, 5.0)]:
    print(f"  ||[L({t}),L({s})]|| =", np.linalg.norm(commutator(generator_at(g, t), generator_at(g, s))))
    print(f"  ||[L({t}),B({t})]|| =", np.linalg.norm(commutator(generator_at(g, t), integral_at(g, t))))

print("=== cascade3: commutators nonzero ===")
gc = assemble(builtin("cascade3", {"eps": 1}))
print("  ||[L(0.3),L(1.7)]|| =", np.linalg.norm(commutator(generator_at(gc, 0.3), generator_at(gc, 1.7))))
print("  ||[L(1),B(1)]|| =", np.linalg.norm(commutator(generator_at(gc, 1), integral_at(gc, 1))))

print("=== cascade3: minimal poly degree of B(t) ===")
for t in (0.5, 1.0, 2.0):
    print(f"  deg B({t}) =", minimal_poly_degree(integral_at(gc, t)))

print("=== cascade3: Gamma structure at t=1, cap=5 ===")
gam = gamma_operator(gc, 1.0, 5)
print("  max |Gamma| =", np.abs(gam).max())
mask = np.abs(gam) > 1e-8 * np.abs(gam).max()
print("  significant entries at:", np.argwhere(mask))

print("=== cascade3: subspace ===")
sub = partial_subspace(gc)
print("  rank =", sub.rank)
comp = np.eye(9) - sub.projector()
print("  complement diag:", np.real(np.diagonal(comp)).round(6))

print("=== lambda3 Gamma structure (default f1,f2) ===")
gl = assemble(builtin("lambda3", {"eps1": 1, "eps3": 2}))
gam = gamma_operator(gl, 1.0, 8)
mask = np.abs(gam) > 1e-8 * np.abs(gam).max()
print("  significant entries at:", np.argwhere(mask))
sub = partial_subspace(gl)
print("  rank =", sub.rank)

print("=== lambda3 with f1=t, f2=exp(-t) ===")
gl2 = assemble(builtin("lambda3", {"f1": "t", "f2": "exp(-t)"}))
sub2 = partial_subspace(gl2)
print("  rank =", sub2.rank)
comp = np.eye(9) - sub2.projector()
print("  complement diag:", np.real(np.diagonal(comp)).round(6))

print("=== cascade4 ===")
g4 = assemble(builtin("cascade4", {"eps1": 1, "eps2": 2}))
t0 = sorted(default_sample_times())[6]
print("  deg B(median) =", minimal_poly_degree(integral_at(g4, t0)))
sub4 = partial_subspace(g4)
print("  rank =", sub4.rank)
comp = np.eye(16) - sub4.projector()
print("  complement diag:", np.real(np.diagonal(comp)).round(6))

print("=== classify reports ===")
for name, params in [("v3", {"eps1": 1, "eps3": 2}), ("cascade3", {"eps": 1}),
                     ("lambda3", {"eps1": 1, "eps3": 2}), ("cascade4", {"eps1": 1, "eps2": 2})]:
    rep = classify(assemble(builtin(name, params)))
    print(f"  {name}: functional={rep.functional} integral={rep.integral} "
          f"rank={rep.partial_rank} cap={rep.power_cap} resid={rep.residual_max:.2e} "
          f"coord={rep.excluded_coordinate} level={rep.excluded_level}")

print("=== v3 closed form vs paper formula ===")
gv = assemble(builtin("v3", {"eps1": 1, "eps3": 2}))
rho0 = np.diag([0.5, 0, 0.5]).astype(complex)
grid = np.linspace(0, 20, 101)
tr = propagate_closed_form(gv, rho0, grid)
w = 1.0
r11 = 0.5 * np.exp((-2 * w * grid + np.sin(2 * w * grid)) / (4 * w))
r33 = 0.5 * np.exp(-(2 * w * grid + np.sin(2 * w * grid)) / (4 * w))
r22 = 1 - np.exp(-grid / 2) * np.cosh(np.sin(2 * w * grid) / (4 * w))
print("  max err p1:", np.abs(tr.states[:, 0, 0].real - r11).max())
print("  max err p2:", np.abs(tr.states[:, 1, 1].real - r22).max())
print("  max err p3:", np.abs(tr.states[:, 2, 2].real - r33).max())

print("=== v3 phase state rho13 ===")
phi = np.pi / 3
rho0p = phase_state(3, [1, 3], [phi])  # rho_13(0) = e^{-i phi}/2
trp = propagate_closed_form(gv, rho0p, grid)
expected = 0.5 * np.exp((-0.5 + 1j * (2 - 1)) * grid) * np.exp(-1j * phi)
print("  max |rho13 - expected|:", np.abs(trp.states[:, 0, 2] - expected).max())

print("=== cascade3 xi(t) ===")
p = 0.0
trc = propagate_closed_form(gc, np.diag([p, 1 - p, 0]).astype(complex), grid)
xi = (1 - p) * np.exp(-(2 * grid + np.sin(2 * grid)) / 4)
print("  max err rho22 vs xi:", np.abs(trc.states[:, 1, 1].real - xi).max())

print("=== cascade3 sigma12 phase ===")
E = 1.0
s0 = phase_state(3, [1, 2], [phi])
trs = propagate_closed_form(gc, s0, grid)
sig12 = 0.5 * np.exp((-0.25 + 1j * E) * grid - np.sin(2 * grid) / 8) * np.exp(-1j * phi)
print("  max |sigma12 - expected|:", np.abs(trs.states[:, 0, 1] - sig12).max())

print("=== lambda3 phase rotation sign check ===")
# H = diag(-eps1, 0, -eps3): level energies E1 = -eps1, E3 = -eps3
eps1, eps3 = 1.0, 2.0
gl = assemble(builtin("lambda3", {"eps1": eps1, "eps3": eps3}))
lam0 = phase_state(3, [1, 3], [phi])  # rho13(0) = e^{-i phi}/2
trl = propagate_closed_form(gl, lam0, grid)
E1, E3 = -eps1, -eps3
expected = 0.5 * np.exp(1j * (E3 - E1) * grid) * np.exp(-1j * phi)
print("  with (E3-E1)=level energies:", np.abs(trl.states[:, 0, 2] - expected).max())
expected_paper = 0.5 * np.exp(1j * (eps3 - eps1) * grid) * np.exp(-1j * phi)
print("  with (eps3-eps1) raw params:", np.abs(trl.states[:, 0, 2] - expected_paper).max())

print("=== cascade4 populations ===")
g4 = assemble(builtin("cascade4", {"eps1": 1, "eps2": 2}))
rho04 = np.diag([0, 1/3, 2/3, 0]).astype(complex)
tr4 = propagate_closed_form(g4, rho04, grid)
E_ = np.exp((-6 * grid + np.sin(6 * grid)) / 12)
p3 = (2/3) * E_
p2 = (1/(18)) * E_ * (6 * (1 + grid) - np.sin(6 * grid))
p1 = 1 + (1/18) * E_ * (-6 * (3 + grid) + np.sin(6 * grid))
print("  max err p1:", np.abs(tr4.states[:, 0, 0].real - p1).max())
print("  max err p2:", np.abs(tr4.states[:, 1, 1].real - p2).max())
print("  max err p3:", np.abs(tr4.states[:, 2, 2].real - p3).max())

print("=== cascade4 coherences (input3) ===")
phi12, phi13 = np.pi, 0.0
s04 = phase_state(4, [1, 2, 3], [phi12, phi13])
tr4s = propagate_closed_form(g4, s04, grid)
e1, e2 = 1.0, 2.0
s21 = (1/3) * np.exp(-0.25 * grid + 1j * (e1 - e2) * grid + np.sin(6 * grid) / 24) * np.exp(1j * phi12)
s31 = (1/3) * np.exp(-0.25 * grid - 1j * (e1 + e2) * grid + np.sin(6 * grid) / 24) * np.exp(1j * phi13)
s32 = (1/3) * np.exp(-0.5 * grid - 2j * e1 * grid + np.sin(6 * grid) / 12) * np.exp(1j * (phi13 - phi12))
print("  max |s21 err|:", np.abs(tr4s.states[:, 1, 0] - s21).max())
print("  max |s31 err|:", np.abs(tr4s.states[:, 2, 0] - s31).max())
print("  max |s32 err|:", np.abs(tr4s.states[:, 2, 1] - s32).max())

print("=== oracle equivalence quick checks ===")
for name, params, rho0x in [
    ("v3", {"eps1": 1, "eps3": 2}, np.diag([0.5, 0, 0.5]).astype(complex)),
    ("cascade3", {"eps": 1}, np.diag([0, 1, 0]).astype(complex)),
    ("lambda3", {"eps1": 1, "eps3": 2}, phase_state(3, [1, 3], [np.pi])),
    ("cascade4", {"eps1": 1, "eps2": 2}, np.diag([0, 1/3, 2/3, 0]).astype(complex)),
]:
    gg = assemble(builtin(name, params))
    short = np.linspace(0, 20, 81)
    c = propagate_closed_form(gg, rho0x, short)
    o = ode_oracle(gg, rho0x, short)
    print(f"  {name}: dist = {compare(c, o):.2e}")

print("=== negative controls ===")
short5 = np.linspace(0, 5, 51)
for name, params, bad in [
    ("cascade3", {"eps": 1}, np.diag([0, 0, 1]).astype(complex)),
    ("cascade4", {"eps1": 1, "eps2": 2}, np.diag([0, 0, 0, 1]).astype(complex)),
]:
    gg = assemble(builtin(name, params))
    c = propagate_closed_form(gg, bad, short5)
    o = ode_oracle(gg, bad, short5)
    print(f"  {name}: dist = {compare(c, o):.3e}, fedorov = {fedorov_residual(gg, vec(bad), short5):.3e}")

print("=== fedorov residual admissible ===")
resid = fedorov_residual(gc, vec(np.diag([0.5, 0.5, 0]).astype(complex)), np.linspace(0, 5, 51))
print("  cascade3 admissible:", f"{resid:.2e}")

print("=== lambda3 stationarity ===")
gl = assemble(builtin("lambda3", {"eps1": 1, "eps3": 2}))
st = np.diag([0.4, 0, 0.6]).astype(complex)
trst = propagate_closed_form(gl, st, grid)
print("  max dev from rho0:", max(np.abs(trst.states[i] - st).max() for i in range(len(grid))))
