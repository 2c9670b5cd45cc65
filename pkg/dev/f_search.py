"""Dev: search F-symbol defining conventions so that pentagon Eq-(9)-form holds.

F^{ijm}_{kln} defined by projecting the m-channel tensor onto the n-channel
basis.  Variants: placement of the dual on the internal m / n contractions,
dual flags on the four external legs, and the (i,l)/(j,k) pairing for n.
"""
import itertools, sys
import numpy as np
from topoforge.groups import build_group
from topoforge.reps import irreps, fusion_data, intertwiner
from topoforge.errors import NotAdmissible

def build_F(name, mdual_on_t1, ndual_on_t3, legdual, pairing):
    """legdual: 4 bools for legs (i,j,k,l); pairing: 'il' or 'ik'."""
    G = build_group(name)
    fus = fusion_data(G)
    R, dual, dims = fus.n_labels, fus.dual, fus.dims
    def dd(lbl, flag): return int(dual[lbl]) if flag else lbl
    def I(a,b,c):
        try: return intertwiner(G,a,b,c).tensor
        except NotAdmissible: return None
    F = np.zeros((R,)*6, dtype=complex)
    ei,ej,ek,el = legdual
    for i,j,k,l in itertools.product(range(R), repeat=4):
        Li, Lj, Lk, Ll = dd(i,ei), dd(j,ej), dd(k,ek), dd(l,el)
        # n-channel basis
        rhs = {}
        for n in range(R):
            n3 = dd(n, ndual_on_t3); n4 = dd(n, not ndual_on_t3)
            if pairing == 'il':
                t3 = I(Li, Ll, n3); t4 = I(Lj, Lk, n4)
                if t3 is None or t4 is None: continue
                T = np.einsum('adx,bcx->abcd', t3, t4)
            else:
                t3 = I(Li, Lk, n3); t4 = I(Lj, Ll, n4)
                if t3 is None or t4 is None: continue
                T = np.einsum('acx,bdx->abcd', t3, t4)
            nrm2 = np.vdot(T, T)
            if abs(nrm2) < 1e-14: continue
            rhs[n] = (T, nrm2)
        for m in range(R):
            m1 = dd(m, mdual_on_t1); m2 = dd(m, not mdual_on_t1)
            t1 = I(Li, Lj, m1); t2 = I(Lk, Ll, m2)
            if t1 is None or t2 is None: continue
            TL = np.einsum('abx,cdx->abcd', t1, t2)
            for n,(T,nrm2) in rhs.items():
                F[i,j,m,k,l,n] = np.vdot(T, TL)/nrm2
    return F, dual

def pentagon_residual(F, dual):
    R = F.shape[0]
    d = dual
    tk = lambda X, ax: np.take(X, d, axis=ax)
    # lhs: sum_n F^{mlq}_{k p* n} F^{jip}_{m n s*} F^{j s* n}_{l k r*}
    A = tk(F, 4)                 # A[m,l,q,k,p,n] = F^{mlq}_{k p* n}
    B = tk(F, 5)                 # B[j,i,p,m,n,s] = F^{jip}_{m n s*}
    C = tk(tk(F, 1), 5)          # C[j,s,n,l,k,r] = F^{j s* n}_{l k r*}
    lhs = np.einsum('mlqkpn,jipmns,jsnlkr->jipqmlksr', A, B, C)
    # rhs: F^{jip}_{q* k r*}  F^{r i q*}_{m l s*}
    D = tk(tk(F, 3), 5)          # D[j,i,p,q,k,r] = F^{jip}_{q* k r*}
    E = tk(tk(F, 2), 5)          # E[r,i,q,m,l,s] = F^{riq*}_{mls*}
    rhs = np.einsum('jipqkr,riqmls->jipqmlksr', D, E)
    return np.max(np.abs(lhs-rhs))

def id_check(F, dual):
    # B_p^0 identity: F[b, g*, h, 0, h', g'*] = delta_{hh'} delta_{gg'} on admissible
    R = F.shape[0]
    worst = 0.0
    for b,g,h,gp,hp in itertools.product(range(R), repeat=5):
        val = F[b, dual[g], h, 0, hp, dual[gp]]
        if abs(val) < 1e-13 and not (g==gp and h==hp): continue
        want = 1.0 if (g==gp and h==hp) else 0.0
        if abs(val) > 1e-13 or want:
            if abs(val-want) > worst and abs(val) > 1e-13:
                worst = max(worst, abs(val-want))
    return worst

results = []
for mdual, ndual, pairing in itertools.product([False,True],[False,True],['il','ik']):
    for legdual in itertools.product([False,True], repeat=4):
        key = (mdual,ndual,pairing,legdual)
        res = {}
        ok = True
        for name in ['Z3']:
            F, dual = build_F(name, mdual, ndual, legdual, pairing)
            r = pentagon_residual(F, dual)
            res[name] = r
            if r > 1e-9: ok = False
        if ok:
            F, dual = build_F('S3', mdual, ndual, legdual, pairing)
            rs3 = pentagon_residual(F, dual)
            Fz, dz = build_F('Z3', mdual, ndual, legdual, pairing)
            results.append((key, res['Z3'], rs3, id_check(Fz,dz), id_check(F,dual)))
            print(key, 'Z3', res['Z3'], 'S3', rs3, 'id Z3', results[-1][3], 'id S3', results[-1][4])
print('total passing Z3:', len(results))
