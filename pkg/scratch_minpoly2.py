import numpy as np

from lindblad_pc import assemble, builtin, integral_at, minimal_poly_degree, vec

g0 = assemble(builtin("cascade3", {"eps": 0.0}))
for t in (0.5, 1.0, 2.0):
    b = integral_at(g0, t)
    print(f"t={t}: degree = {minimal_poly_degree(b)}")

# Gram spectrum near the decision point, to see the gap
b = integral_at(g0, 1.0)
n = b.shape[0]
power = np.eye(n, dtype=complex)
vecs = [vec(power) / np.sqrt(n)]
for m in range(1, 8):
    power = power @ b
    vecs.append(vec(power) / np.linalg.norm(vec(power)))
    basis = np.column_stack(vecs)
    eigs = np.linalg.eigvalsh(basis.conj().T @ basis)
    print(f"m={m}: gram eigs = {['%.3e' % e for e in eigs]}")

# scale invariance
for c in (1e-3, 1.0, 1e3):
    print(f"degree(c*B), c={c}: {minimal_poly_degree(c * b)}")

# check t at pi/2 (rates integrals equal) degenerates further
print("t=pi/2:", minimal_poly_degree(integral_at(g0, np.pi / 2)))

# nilpotent, identity, zero
nil = np.zeros((3, 3), complex); nil[0, 1] = nil[1, 2] = 1.0
print("nilpotent:", minimal_poly_degree(nil))
print("identity:", minimal_poly_degree(np.eye(4, dtype=complex)))
print("zero:", minimal_poly_degree(np.zeros((4, 4), complex)))
