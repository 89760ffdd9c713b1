import math
import numpy as np

from lindblad_pc import (admissible, assemble, builtin, entropy, null_space,
                         observable_series, partial_subspace, phase_state,
                         propagate_closed_form, purity, expm, vec, unvec)

# cascade3 purity/entropy, p=0
g = assemble(builtin("cascade3", {"eps": 1}))
grid = np.linspace(0, 20, 400)
tr = propagate_closed_form(g, np.diag([0, 1, 0]).astype(complex), grid)
xi = np.exp(-(2 * grid + np.sin(2 * grid)) / 4)
pi_exact = 2 * xi**2 - 2 * xi + 1
s_exact = np.where(xi * (1 - xi) > 0,
                   -(1 - xi) * np.log(np.clip(1 - xi, 1e-300, None))
                   - xi * np.log(np.clip(xi, 1e-300, None)), 0.0)
p = purity(tr)
s = entropy(tr)
print("purity err:", np.abs(p - pi_exact).max())
print("entropy err:", np.abs(s - s_exact).max())
print("min purity:", p.min(), "(expect ~0.5)")
print("max entropy:", s.max(), "(expect ~%.5f)" % math.log(2))

# admissibility of laminput
gl = assemble(builtin("lambda3", {"eps1": 1, "eps3": 2}))
sub = partial_subspace(gl)
lam = phase_state(3, [1, 3], [np.pi])
print("laminput admissible:", admissible(lam, sub))
print("diag(p,0,1-p) admissible:", admissible(np.diag([0.3, 0, 0.7]).astype(complex), sub))
print("pure 2 admissible:", admissible(np.diag([0, 1, 0]).astype(complex), sub))

# degenerate lambda stationary phase state
gl0 = assemble(builtin("lambda3", {"eps1": 0, "eps3": 0}))
trl = propagate_closed_form(gl0, lam, np.linspace(0, 20, 81))
print("degenerate lambda max dev:", max(np.abs(trl.states[i] - lam).max() for i in range(81)))

# lambda phase rotation magnitude/arg
gl = assemble(builtin("lambda3", {"eps1": 1.0, "eps3": 2.0}))
trl = propagate_closed_form(gl, lam, grid)
r13 = trl.states[:, 0, 2]
print("|rho13| dev from 1/2:", np.abs(np.abs(r13) - 0.5).max())
e1, e3 = -1.0, -2.0  # level energies
expected_arg = (e3 - e1) * grid - np.pi
delta = np.angle(r13) - expected_arg
delta = (delta + np.pi) % (2 * np.pi) - np.pi
print("arg dev:", np.abs(delta).max())

# expm derivative property
rng = np.random.default_rng(11)
worst = 0.0
for _ in range(5):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a *= 1.0 / np.linalg.norm(a)
    h = 1e-5
    d = (expm((1 + h) * a) - expm((1 - h) * a)) / (2 * h)
    worst = max(worst, np.abs(d - a @ expm(a)).max())
print("expm derivative err:", worst)

# Lemma 1 kernel-sum on random PSD pairs
worst = 0.0
for _ in range(10):
    r1 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    r2 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    # force nontrivial kernels
    r1[:, 0] = 0; r1[:, 1] = 0
    r2[:, 0] = 0; r2[:, 2] = 0
    s1 = r1.conj().T @ r1
    s2 = r2.conj().T @ r2
    ker_sum = null_space(s1 + s2)
    k1 = null_space(s1)
    k2 = null_space(s2)
    # intersection projector via kernel of (I-P1) + (I-P2)... direct: P_int
    # intersection = null space of stacked [r1; r2]
    stacked = np.vstack([r1, r2])
    _, sv, vh = np.linalg.svd(stacked)
    nnz = int(np.sum(sv > 1e-10 * sv[0]))
    inter = vh[nnz:].conj().T
    p_int = inter @ inter.conj().T
    worst = max(worst, np.abs(ker_sum.projector() - p_int).max())
print("lemma1 projector err:", worst)

# CLI smoke
import subprocess, sys
r = subprocess.run([sys.executable, "-m", "lindblad_pc", "classify", "--builtin", "cascade3"],
                   capture_output=True, text=True)
print("classify rc:", r.returncode)
print(r.stdout)
r = subprocess.run([sys.executable, "-m", "lindblad_pc", "solve", "--builtin", "cascade3",
                    "--rho0", "diag:0,1,0", "--t-max", "2", "--steps", "5"],
                   capture_output=True, text=True)
print("solve rc:", r.returncode)
print(r.stdout)
r = subprocess.run([sys.executable, "-m", "lindblad_pc", "solve", "--builtin", "cascade3",
                    "--rho0", "diag:0,0,1", "--t-max", "2", "--steps", "5"],
                   capture_output=True, text=True)
print("inadmissible solve rc:", r.returncode, "stderr:", r.stderr.strip())
r = subprocess.run([sys.executable, "-m", "lindblad_pc", "verify", "--builtin", "v3",
                    "--rho0", "diag:0.5,0,0.5", "--t-max", "5", "--steps", "51"],
                   capture_output=True, text=True)
print("verify rc:", r.returncode)
print(r.stdout)
r = subprocess.run([sys.executable, "-m", "lindblad_pc", "verify", "--builtin", "cascade3",
                    "--rho0", "diag:0,0,1", "--t-max", "5", "--steps", "51", "--force"],
                   capture_output=True, text=True)
print("verify forced rc:", r.returncode)
print(r.stdout, r.stderr)
