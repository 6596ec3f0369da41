"""BLS12-381 arithmetic: field towers, both groups, the ate pairing, and
compressed serialization.

Everything here is implemented directly over gmpy2 integers (there is no
pairing library dependency).  Conventions follow the widely deployed ones:
public keys live in G1 (48-byte compressed), signatures in G2 (96-byte
compressed), Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - (u+1)),
Fq12 = Fq6[w]/(w^2 - v), and G2 points are kept on the M-twist
y^2 = x^3 + 4(u+1).

The final exponentiation evaluates the cube of the standard reduced ate
pairing via 3(p^4-p^2+1)/r = (x-1)^2 (x+p) (x^2+p^2-1) + 3; cubing is a
bijection on the order-r target group, so bilinearity, non-degeneracy, and
every verification equation are unaffected.

Points are Jacobian (X, Y, Z) triples; Z = 0 encodes infinity.
"""

from __future__ import annotations

import hashlib

from gmpy2 import invert, mpz

P = mpz(0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB)
R = mpz(0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001)
# Curve parameter x of the BLS12 family (negative for this curve).
X_ABS = mpz(0xD201000000010000)
B_G1 = mpz(4)

H1 = mpz(0x396C8C005555E1568C00AAAB0000AAAB)
H2 = mpz(0x5D543A95414E7F1091D50792876A202CD91DE4547085ABAA68A205B2E5A7DDFA628F1CB4D9E82EF21537E293A6691AE1616EC6E786F0C70CF1C38E31C7238E5)

_P_MINUS_1_HALF = (P - 1) // 2
_SQRT_EXP = (P + 1) // 4  # valid because p % 4 == 3

ONE2 = (mpz(1), mpz(0))
ZERO2 = (mpz(0), mpz(0))

G1_INF = (mpz(1), mpz(1), mpz(0))
G2_INF = (ONE2, ONE2, ZERO2)

G1_GEN = (
    mpz(0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB),
    mpz(0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1),
    mpz(1),
)
G2_GEN = (
    (
        mpz(0x024AA2B2F08F0A91260805272DC51051C6E47AD4FA403B02B4510B647AE3D1770BAC0326A805BBEFD48056C8C121BDB8),
        mpz(0x13E02B6052719F607DACD3A088274F65596BD0D09920B61AB5DA61BBDC7F5049334CF11213945D57E5AC7D055D042B7E),
    ),
    (
        mpz(0x0CE5D527727D6E118CC9CDC6DA2E351AADFD9BAA8CBDD3A76D429A695160D12C923AC9CC3BACA289E193548608B82801),
        mpz(0x0606C4A02EA734CC32ACD2B02BC28B99CB3E287E85A763AF267492AB572E99AB3F370D275CEC1DA1AAA9075FF05F79BE),
    ),
    (mpz(1), mpz(0)),
)


# --- Fq ---------------------------------------------------------------------

def fq_inv(a):
    return invert(a, P)


def fq_sqrt(a):
    a %= P
    if a == 0:
        return mpz(0)
    s = pow(a, _SQRT_EXP, P)
    return s if s * s % P == a else None


def fq_legendre(a):
    a %= P
    if a == 0:
        return 0
    return 1 if pow(a, _P_MINUS_1_HALF, P) == 1 else -1


# --- Fq2 = Fq[u]/(u^2 + 1) --------------------------------------------------

def fq2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fq2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fq2_neg(a):
    return (-a[0] % P, -a[1] % P)


def fq2_conj(a):
    return (a[0], -a[1] % P)


def fq2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fq2_sqr(a):
    a0, a1 = a
    return ((a0 - a1) * (a0 + a1) % P, 2 * a0 * a1 % P)


def fq2_scale(a, k):
    return (a[0] * k % P, a[1] * k % P)


def fq2_mul_xi(a):
    # multiply by xi = 1 + u
    a0, a1 = a
    return ((a0 - a1) % P, (a0 + a1) % P)


def fq2_inv(a):
    a0, a1 = a
    d = invert(a0 * a0 + a1 * a1, P)
    return (a0 * d % P, -a1 * d % P)


def fq2_pow(a, e):
    result = ONE2
    base = a
    while e:
        if e & 1:
            result = fq2_mul(result, base)
        base = fq2_sqr(base)
        e >>= 1
    return result


def fq2_sqrt(a):
    """Square root in Fq2 if it exists, else None (complex method)."""
    a0, a1 = a[0] % P, a[1] % P
    if a0 == 0 and a1 == 0:
        return ZERO2
    if a1 == 0:
        s = fq_sqrt(a0)
        if s is not None:
            return (s, mpz(0))
        # -a0 must be square when a0 is not (since -1 is a non-residue)
        return (mpz(0), fq_sqrt(-a0 % P))
    n = (a0 * a0 + a1 * a1) % P
    s = fq_sqrt(n)
    if s is None:
        return None
    half = invert(mpz(2), P)
    t2 = (a0 + s) * half % P
    if fq_legendre(t2) != 1:
        t2 = (a0 - s) * half % P
        if fq_legendre(t2) != 1:
            return None
    t = fq_sqrt(t2)
    y = (t, a1 * invert(2 * t, P) % P)
    return y if fq2_sqr(y) == (a0, a1) else None


# --- Fq6 = Fq2[v]/(v^3 - xi) -------------------------------------------------

ZERO6 = (ZERO2, ZERO2, ZERO2)
ONE6 = (ONE2, ZERO2, ZERO2)


def fq6_add(a, b):
    return (fq2_add(a[0], b[0]), fq2_add(a[1], b[1]), fq2_add(a[2], b[2]))


def fq6_sub(a, b):
    return (fq2_sub(a[0], b[0]), fq2_sub(a[1], b[1]), fq2_sub(a[2], b[2]))


def fq6_neg(a):
    return (fq2_neg(a[0]), fq2_neg(a[1]), fq2_neg(a[2]))


def fq6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    v0 = fq2_mul(a0, b0)
    v1 = fq2_mul(a1, b1)
    v2 = fq2_mul(a2, b2)
    c0 = fq2_add(v0, fq2_mul_xi(fq2_sub(fq2_mul(fq2_add(a1, a2), fq2_add(b1, b2)), fq2_add(v1, v2))))
    c1 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a1), fq2_add(b0, b1)), fq2_add(v0, v1)), fq2_mul_xi(v2))
    c2 = fq2_add(fq2_sub(fq2_mul(fq2_add(a0, a2), fq2_add(b0, b2)), fq2_add(v0, v2)), v1)
    return (c0, c1, c2)


def fq6_sqr(a):
    a0, a1, a2 = a
    v0 = fq2_sqr(a0)
    v1 = fq2_sqr(a1)
    v2 = fq2_sqr(a2)
    c0 = fq2_add(v0, fq2_mul_xi(fq2_sub(fq2_sqr(fq2_add(a1, a2)), fq2_add(v1, v2))))
    c1 = fq2_add(fq2_sub(fq2_sqr(fq2_add(a0, a1)), fq2_add(v0, v1)), fq2_mul_xi(v2))
    c2 = fq2_add(fq2_sub(fq2_sqr(fq2_add(a0, a2)), fq2_add(v0, v2)), v1)
    return (c0, c1, c2)


def fq6_mul_v(a):
    # multiply by v: (a0, a1, a2) -> (xi*a2, a0, a1)
    return (fq2_mul_xi(a[2]), a[0], a[1])


def fq6_scale2(a, k2):
    return (fq2_mul(a[0], k2), fq2_mul(a[1], k2), fq2_mul(a[2], k2))


def fq6_inv(a):
    a0, a1, a2 = a
    c0 = fq2_sub(fq2_sqr(a0), fq2_mul_xi(fq2_mul(a1, a2)))
    c1 = fq2_sub(fq2_mul_xi(fq2_sqr(a2)), fq2_mul(a0, a1))
    c2 = fq2_sub(fq2_sqr(a1), fq2_mul(a0, a2))
    t = fq2_add(fq2_mul(a0, c0), fq2_mul_xi(fq2_add(fq2_mul(a2, c1), fq2_mul(a1, c2))))
    ti = fq2_inv(t)
    return (fq2_mul(c0, ti), fq2_mul(c1, ti), fq2_mul(c2, ti))


# --- Fq12 = Fq6[w]/(w^2 - v) --------------------------------------------------

ONE12 = (ONE6, ZERO6)


def fq12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fq6_mul(a0, b0)
    t1 = fq6_mul(a1, b1)
    c1 = fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(b0, b1)), fq6_add(t0, t1))
    return (fq6_add(t0, fq6_mul_v(t1)), c1)


def fq12_sqr(a):
    a0, a1 = a
    t = fq6_mul(a0, a1)
    c0 = fq6_sub(fq6_sub(fq6_mul(fq6_add(a0, a1), fq6_add(a0, fq6_mul_v(a1))), t), fq6_mul_v(t))
    return (c0, fq6_add(t, t))


def fq12_conj(a):
    return (a[0], fq6_neg(a[1]))


def fq12_inv(a):
    a0, a1 = a
    d = fq6_inv(fq6_sub(fq6_sqr(a0), fq6_mul_v(fq6_sqr(a1))))
    return (fq6_mul(a0, d), fq6_neg(fq6_mul(a1, d)))


def fq12_mul_line(f, l0, l3, l5):
    """Multiply f by the sparse line value l0 + l3*(v*w) + l5*(v^2*w)."""
    A, B = f
    # (A + Bw)(E + Ow) = A*E + v*(B*O) + ((A+B)(E+O) - A*E - B*O) w
    # with E = (l0, 0, 0) and O = (0, l3, l5).
    t1 = fq6_scale2(A, l0)
    b0, b1, b2 = B
    t2 = (
        fq2_mul_xi(fq2_add(fq2_mul(b1, l5), fq2_mul(b2, l3))),
        fq2_add(fq2_mul(b0, l3), fq2_mul_xi(fq2_mul(b2, l5))),
        fq2_add(fq2_mul(b0, l5), fq2_mul(b1, l3)),
    )
    s = fq6_add(A, B)
    d = (l0, l3, l5)
    t3 = fq6_mul(s, d)
    even = fq6_add(t1, fq6_mul_v(t2))
    odd = fq6_sub(t3, fq6_add(t1, t2))
    return (even, odd)


def fq12_pow(a, e):
    result = ONE12
    base = a
    while e:
        if e & 1:
            result = fq12_mul(result, base)
        base = fq12_sqr(base)
        e >>= 1
    return result


# Granger-Scott squaring for elements of the cyclotomic subgroup, working in
# Fq4 = Fq2[s]/(s^2 - xi) with s = w^3; the w-basis slot g_i regroups as
# a = (g0, g3), b = (g1, g4), c = (g2, g5).

def _fq4_sqr(x):
    x0, x1 = x
    t = fq2_mul(x0, x1)
    c0 = fq2_sub(
        fq2_sub(fq2_mul(fq2_add(x0, x1), fq2_add(x0, fq2_mul_xi(x1))), t),
        fq2_mul_xi(t),
    )
    return (c0, fq2_add(t, t))


def fq12_cyclotomic_sqr(f):
    """Square of f, valid only for f with f^(p^6+1-ish) structure, i.e.
    elements produced by the easy part of the final exponentiation."""
    (e0, e1, e2), (o0, o1, o2) = f
    a = (e0, o1)
    b = (o0, e2)
    c = (e1, o2)
    a2 = _fq4_sqr(a)
    b2 = _fq4_sqr(b)
    c2 = _fq4_sqr(c)
    sc2 = (fq2_mul_xi(c2[1]), c2[0])  # s * c^2

    def _comb(sq, x, sign):
        # 3*sq + sign * 2*conj(x)
        r0 = (3 * sq[0][0] + sign * 2 * x[0][0]) % P, (3 * sq[0][1] + sign * 2 * x[0][1]) % P
        r1 = (3 * sq[1][0] - sign * 2 * x[1][0]) % P, (3 * sq[1][1] - sign * 2 * x[1][1]) % P
        return (r0, r1)

    ap = _comb(a2, a, -1)
    bp = _comb(sc2, b, +1)
    cp = _comb(b2, c, -1)
    return ((ap[0], cp[0], bp[1]), (bp[0], ap[1], cp[1]))


# Frobenius coefficients gamma_i = xi^(i*(p-1)/6) and xi^(i*(p^2-1)/6).
_XI = (mpz(1), mpz(1))
_FROB1 = [fq2_pow(_XI, i * (P - 1) // 6) for i in range(6)]
_FROB2 = [fq2_pow(_XI, i * (P * P - 1) // 6) for i in range(6)]


def _frob_map(f, coeffs, conjugate):
    (e0, e1, e2), (o0, o1, o2) = f
    if conjugate:
        e0, e1, e2 = fq2_conj(e0), fq2_conj(e1), fq2_conj(e2)
        o0, o1, o2 = fq2_conj(o0), fq2_conj(o1), fq2_conj(o2)
    # w-power of each slot: even part (0, 2, 4), odd part (1, 3, 5)
    return (
        (e0, fq2_mul(e1, coeffs[2]), fq2_mul(e2, coeffs[4])),
        (fq2_mul(o0, coeffs[1]), fq2_mul(o1, coeffs[3]), fq2_mul(o2, coeffs[5])),
    )


def fq12_frob1(f):
    return _frob_map(f, _FROB1, conjugate=True)


def fq12_frob2(f):
    return _frob_map(f, _FROB2, conjugate=False)


# --- G1 -----------------------------------------------------------------------

def g1_is_inf(p):
    return p[2] == 0


def g1_neg(p):
    return (p[0], -p[1] % P, p[2])


def g1_double(p):
    X1, Y1, Z1 = p
    if Z1 == 0:
        return p
    A = X1 * X1 % P
    B = Y1 * Y1 % P
    C = B * B % P
    D = 2 * ((X1 + B) * (X1 + B) - A - C) % P
    E = 3 * A % P
    F = E * E % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y1 * Z1 % P
    return (X3, Y3, Z3)


def g1_add(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == 0:
        return q
    if Z2 == 0:
        return p
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    if U1 == U2:
        if S1 == S2:
            return g1_double(p)
        return G1_INF
    H = (U2 - U1) % P
    I = 4 * H * H % P
    J = H * I % P
    rr = 2 * (S2 - S1) % P
    V = U1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) * (Z1 + Z2) - Z1Z1 - Z2Z2) * H % P
    return (X3, Y3, Z3)


def g1_add_mixed(p, q):
    """p (Jacobian) + q (affine, Z == 1)."""
    X1, Y1, Z1 = p
    X2, Y2, _ = q
    if Z1 == 0:
        return q
    Z1Z1 = Z1 * Z1 % P
    U2 = X2 * Z1Z1 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    H = (U2 - X1) % P
    rr = (S2 - Y1) % P
    if H == 0:
        if rr == 0:
            return g1_double(p)
        return G1_INF
    HH = H * H % P
    I = 4 * HH % P
    J = H * I % P
    rr = 2 * rr % P
    V = X1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * Y1 * J) % P
    Z3 = ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % P
    return (X3, Y3, Z3)


def g1_mul(p, k):
    k = int(k)
    if k < 0:
        return g1_neg(g1_mul(p, -k))
    acc = G1_INF
    for bit in bin(k)[2:]:
        acc = g1_double(acc)
        if bit == "1":
            acc = g1_add(acc, p)
    return acc


def g1_normalize(p):
    X, Y, Z = p
    if Z == 0:
        return G1_INF
    if Z == 1:
        return p
    zi = fq_inv(Z)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 * zi % P, mpz(1))


def g1_batch_normalize(points):
    """Affine forms of many Jacobian points with one shared field inversion."""
    zs = []
    idxs = []
    for i, (_, _, Z) in enumerate(points):
        if Z != 0 and Z != 1:
            zs.append(Z)
            idxs.append(i)
    out = list(points)
    if zs:
        prefix = [mpz(1)]
        for z in zs:
            prefix.append(prefix[-1] * z % P)
        inv_all = fq_inv(prefix[-1])
        invs = [mpz(0)] * len(zs)
        for j in range(len(zs) - 1, -1, -1):
            invs[j] = inv_all * prefix[j] % P
            inv_all = inv_all * zs[j] % P
        for j, i in enumerate(idxs):
            X, Y, _ = points[i]
            zi = invs[j]
            zi2 = zi * zi % P
            out[i] = (X * zi2 % P, Y * zi2 * zi % P, mpz(1))
    for i, (X, Y, Z) in enumerate(out):
        if Z == 0:
            out[i] = G1_INF
    return out


def g1_eq(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == 0 or Z2 == 0:
        return Z1 == Z2
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    return (
        X1 * Z2Z2 % P == X2 * Z1Z1 % P
        and Y1 * Z2 * Z2Z2 % P == Y2 * Z1 * Z1Z1 % P
    )


def g1_is_on_curve(p):
    X, Y, Z = p
    if Z == 0:
        return True
    # Jacobian: Y^2 = X^3 + b Z^6
    return (Y * Y - X * X * X - B_G1 * pow(Z, 6, P)) % P == 0


def g1_in_subgroup(p):
    return g1_is_on_curve(p) and g1_is_inf(g1_mul(p, R))


def g1_sum(points):
    """Sum of affine points; the workhorse of public-key aggregation."""
    acc = G1_INF
    for pt in points:
        acc = g1_add_mixed(acc, pt) if pt[2] == 1 else g1_add(acc, pt)
    return acc


# --- G2 (on the twist, coordinates in Fq2) ------------------------------------

B_G2 = (mpz(4), mpz(4))


def g2_is_inf(p):
    return p[2] == ZERO2


def g2_neg(p):
    return (p[0], fq2_neg(p[1]), p[2])


def g2_double(p):
    X1, Y1, Z1 = p
    if Z1 == ZERO2:
        return p
    A = fq2_sqr(X1)
    B = fq2_sqr(Y1)
    C = fq2_sqr(B)
    D = fq2_sub(fq2_sqr(fq2_add(X1, B)), fq2_add(A, C))
    D = fq2_add(D, D)
    E = fq2_add(fq2_add(A, A), A)
    F = fq2_sqr(E)
    X3 = fq2_sub(F, fq2_add(D, D))
    eightC = fq2_add(C, C)
    eightC = fq2_add(eightC, eightC)
    eightC = fq2_add(eightC, eightC)
    Y3 = fq2_sub(fq2_mul(E, fq2_sub(D, X3)), eightC)
    Z3 = fq2_mul(fq2_add(Y1, Y1), Z1)
    return (X3, Y3, Z3)


def g2_add(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == ZERO2:
        return q
    if Z2 == ZERO2:
        return p
    Z1Z1 = fq2_sqr(Z1)
    Z2Z2 = fq2_sqr(Z2)
    U1 = fq2_mul(X1, Z2Z2)
    U2 = fq2_mul(X2, Z1Z1)
    S1 = fq2_mul(fq2_mul(Y1, Z2), Z2Z2)
    S2 = fq2_mul(fq2_mul(Y2, Z1), Z1Z1)
    if U1 == U2:
        if S1 == S2:
            return g2_double(p)
        return G2_INF
    H = fq2_sub(U2, U1)
    I = fq2_sqr(fq2_add(H, H))
    J = fq2_mul(H, I)
    rr = fq2_sub(S2, S1)
    rr = fq2_add(rr, rr)
    V = fq2_mul(U1, I)
    X3 = fq2_sub(fq2_sub(fq2_sqr(rr), J), fq2_add(V, V))
    S1J = fq2_mul(S1, J)
    Y3 = fq2_sub(fq2_mul(rr, fq2_sub(V, X3)), fq2_add(S1J, S1J))
    Z3 = fq2_mul(fq2_sub(fq2_sqr(fq2_add(Z1, Z2)), fq2_add(Z1Z1, Z2Z2)), H)
    return (X3, Y3, Z3)


def g2_mul(p, k):
    k = int(k)
    acc = G2_INF
    for bit in bin(k)[2:]:
        acc = g2_double(acc)
        if bit == "1":
            acc = g2_add(acc, p)
    return acc


def g2_normalize(p):
    X, Y, Z = p
    if Z == ZERO2:
        return G2_INF
    if Z == ONE2:
        return p
    zi = fq2_inv(Z)
    zi2 = fq2_sqr(zi)
    return (fq2_mul(X, zi2), fq2_mul(Y, fq2_mul(zi2, zi)), ONE2)


def g2_eq(p, q):
    X1, Y1, Z1 = p
    X2, Y2, Z2 = q
    if Z1 == ZERO2 or Z2 == ZERO2:
        return Z1 == Z2
    Z1Z1 = fq2_sqr(Z1)
    Z2Z2 = fq2_sqr(Z2)
    return fq2_mul(X1, Z2Z2) == fq2_mul(X2, Z1Z1) and fq2_mul(
        fq2_mul(Y1, Z2), Z2Z2
    ) == fq2_mul(fq2_mul(Y2, Z1), Z1Z1)


def g2_is_on_curve(p):
    X, Y, Z = p
    if Z == ZERO2:
        return True
    z6 = fq2_sqr(fq2_mul(Z, fq2_sqr(Z)))
    lhs = fq2_sqr(Y)
    rhs = fq2_add(fq2_mul(fq2_sqr(X), X), fq2_mul(B_G2, z6))
    return lhs == rhs


def g2_in_subgroup(p):
    return g2_is_on_curve(p) and g2_is_inf(g2_mul(p, R))


def g2_sum(points):
    acc = G2_INF
    for pt in points:
        acc = g2_add(acc, pt)
    return acc


# --- Pairing -------------------------------------------------------------------

_X_BITS = bin(int(X_ABS))[3:]  # skip the leading 1


def _dbl_step(T, xp, yp):
    """Double T on the twist; return (2T, line slots) evaluated at (xp, yp)."""
    X, Y, Z = T
    A = fq2_sqr(X)               # X^2
    B = fq2_sqr(Y)               # Y^2
    ZZ = fq2_sqr(Z)
    E = fq2_add(fq2_add(A, A), A)  # 3X^2
    # line: l0 = -2YZ^3 yp xi, l3 = 2Y^2 - 3X^3, l5 = 3X^2 Z^2 xp
    YZ = fq2_mul(Y, Z)
    l0 = fq2_mul_xi(fq2_scale(fq2_mul(YZ, ZZ), -2 * yp % P))
    l3 = fq2_sub(fq2_add(B, B), fq2_mul(E, X))
    l5 = fq2_scale(fq2_mul(E, ZZ), xp)
    # point doubling (shares A, B)
    C = fq2_sqr(B)
    D = fq2_sub(fq2_sqr(fq2_add(X, B)), fq2_add(A, C))
    D = fq2_add(D, D)
    F = fq2_sqr(E)
    X3 = fq2_sub(F, fq2_add(D, D))
    eightC = fq2_add(C, C)
    eightC = fq2_add(eightC, eightC)
    eightC = fq2_add(eightC, eightC)
    Y3 = fq2_sub(fq2_mul(E, fq2_sub(D, X3)), eightC)
    Z3 = fq2_add(YZ, YZ)
    return (X3, Y3, Z3), l0, l3, l5


def _add_step(T, Q, xp, yp):
    """Mixed-add affine Q into T; return (T+Q, line slots) at (xp, yp)."""
    X1, Y1, Z1 = T
    x2, y2 = Q[0], Q[1]
    Z1Z1 = fq2_sqr(Z1)
    U2 = fq2_mul(x2, Z1Z1)
    S2 = fq2_mul(fq2_mul(y2, Z1), Z1Z1)
    H = fq2_sub(U2, X1)
    rho = fq2_sub(S2, Y1)
    HZ = fq2_mul(H, Z1)
    # line through T and Q evaluated at P: l0 = -HZ yp xi,
    # l3 = y2 HZ - rho x2, l5 = rho xp
    l0 = fq2_mul_xi(fq2_scale(HZ, -yp % P))
    l3 = fq2_sub(fq2_mul(y2, HZ), fq2_mul(rho, x2))
    l5 = fq2_scale(rho, xp)
    HH = fq2_sqr(H)
    I = fq2_add(HH, HH)
    I = fq2_add(I, I)
    J = fq2_mul(H, I)
    rr = fq2_add(rho, rho)
    V = fq2_mul(X1, I)
    X3 = fq2_sub(fq2_sub(fq2_sqr(rr), J), fq2_add(V, V))
    YJ = fq2_mul(Y1, J)
    Y3 = fq2_sub(fq2_mul(rr, fq2_sub(V, X3)), fq2_add(YJ, YJ))
    Z3 = fq2_sub(fq2_sqr(fq2_add(Z1, H)), fq2_add(Z1Z1, HH))
    return (X3, Y3, Z3), l0, l3, l5


def miller_loop(pairs):
    """Shared Miller loop over [(P in G1 affine, Q in G2-twist affine)]."""
    live = []
    for p1, q2 in pairs:
        if p1[2] == 0 or q2[2] == ZERO2:
            continue
        p1 = g1_normalize(p1)
        q2 = g2_normalize(q2)
        live.append((p1[0], p1[1], q2))
    if not live:
        return ONE12
    f = ONE12
    Ts = [q for _, _, q in live]
    first = True
    for bit in _X_BITS:
        if not first:
            f = fq12_sqr(f)
        first = False
        for i, (xp, yp, q) in enumerate(live):
            Ts[i], l0, l3, l5 = _dbl_step(Ts[i], xp, yp)
            f = fq12_mul_line(f, l0, l3, l5)
        if bit == "1":
            for i, (xp, yp, q) in enumerate(live):
                Ts[i], l0, l3, l5 = _add_step(Ts[i], q, xp, yp)
                f = fq12_mul_line(f, l0, l3, l5)
    # curve parameter is negative: conjugate (inverse up to final exp)
    return fq12_conj(f)


def _pow_abs_x(f):
    # callers only pass cyclotomic elements (post easy part)
    result = f
    for bit in _X_BITS:
        result = fq12_cyclotomic_sqr(result)
        if bit == "1":
            result = fq12_mul(result, f)
    return result


def final_exponentiation(f):
    # easy part: f^((p^6-1)(p^2+1))
    f = fq12_mul(fq12_conj(f), fq12_inv(f))
    f = fq12_mul(fq12_frob2(f), f)
    # hard part (times 3): f^((x-1)^2 (x+p) (x^2+p^2-1)) * f^3,
    # with x negative so f^x = conj(f^|x|) inside the cyclotomic subgroup.
    m = f

    def pow_x_minus_1(a):
        # a^(x-1) = conj(a^|x| * a)
        return fq12_conj(fq12_mul(_pow_abs_x(a), a))

    a = pow_x_minus_1(m)
    a = pow_x_minus_1(a)
    b = fq12_mul(fq12_conj(_pow_abs_x(a)), fq12_frob1(a))           # a^(x+p)
    c = fq12_mul(
        fq12_mul(_pow_abs_x(_pow_abs_x(b)), fq12_frob2(b)),
        fq12_conj(b),
    )                                                               # b^(x^2+p^2-1)
    m3 = fq12_mul(fq12_sqr(m), m)
    return fq12_mul(c, m3)


def pairing(p1, q2):
    """Reduced ate pairing (cubed), p1 in G1, q2 in G2."""
    return final_exponentiation(miller_loop([(p1, q2)]))


def pairings_are_one(pairs):
    """True iff the product of pairings over all pairs is the identity."""
    return final_exponentiation(miller_loop(pairs)) == ONE12


# --- Hash to G2 -----------------------------------------------------------------

def _hash_stream(dst: bytes, msg: bytes, ctr: int, n: int) -> bytes:
    h = hashlib.shake_256()
    h.update(len(dst).to_bytes(2, "big"))
    h.update(dst)
    h.update(ctr.to_bytes(4, "big"))
    h.update(msg)
    return h.digest(n)


def hash_to_g2(msg: bytes, dst: bytes = b"TREEAGG-V1-SHAKE256-TAI"):
    """Map a message onto the order-r subgroup of the G2 twist.

    Classic try-and-increment: derive candidate x coordinates from an XOF
    until one lands on the curve, then clear the cofactor.  Deterministic,
    uniform over curve points with small counter bias; not constant time.
    """
    for ctr in range(512):
        raw = _hash_stream(dst, msg, ctr, 129)
        x = (
            mpz(int.from_bytes(raw[0:64], "big") % P),
            mpz(int.from_bytes(raw[64:128], "big") % P),
        )
        rhs = fq2_add(fq2_mul(fq2_sqr(x), x), B_G2)
        y = fq2_sqrt(rhs)
        if y is None:
            continue
        neg = fq2_neg(y)
        # canonical branch, then a hash bit picks the sign uniformly
        if (int(y[1]), int(y[0])) > (int(neg[1]), int(neg[0])):
            y, neg = neg, y
        if raw[128] & 1:
            y = neg
        q = g2_mul((x, y, ONE2), H2)
        if not g2_is_inf(q):
            return g2_normalize(q)
    raise RuntimeError("hash_to_g2 failed to find a curve point")


# --- Serialization (compressed, ZCash-style flag bits) -----------------------

_FLAG_COMPRESSED = 0x80
_FLAG_INFINITY = 0x40
_FLAG_SIGN = 0x20


def _y_is_larger_fq(y) -> bool:
    return 2 * y > P


def _y_is_larger_fq2(y) -> bool:
    neg = fq2_neg(y)
    return (int(y[1]), int(y[0])) > (int(neg[1]), int(neg[0]))


def g1_to_bytes(p) -> bytes:
    p = g1_normalize(p)
    if p[2] == 0:
        out = bytearray(48)
        out[0] = _FLAG_COMPRESSED | _FLAG_INFINITY
        return bytes(out)
    out = bytearray(int(p[0]).to_bytes(48, "big"))
    out[0] |= _FLAG_COMPRESSED
    if _y_is_larger_fq(p[1]):
        out[0] |= _FLAG_SIGN
    return bytes(out)


def g1_from_bytes(data: bytes, check_subgroup: bool = True):
    if len(data) != 48:
        raise ValueError("G1 compressed encoding must be 48 bytes")
    flags = data[0]
    if not flags & _FLAG_COMPRESSED:
        raise ValueError("only compressed encodings supported")
    if flags & _FLAG_INFINITY:
        if any(data[1:]) or flags & _FLAG_SIGN or data[0] & 0x1F:
            raise ValueError("malformed infinity encoding")
        return G1_INF
    x = mpz(int.from_bytes(bytes([data[0] & 0x1F]) + data[1:], "big"))
    if x >= P:
        raise ValueError("x coordinate out of range")
    y = fq_sqrt((x * x % P * x + B_G1) % P)
    if y is None:
        raise ValueError("x is not on the curve")
    if _y_is_larger_fq(y) != bool(flags & _FLAG_SIGN):
        y = -y % P
    point = (x, y, mpz(1))
    if check_subgroup and not g1_in_subgroup(point):
        raise ValueError("point not in the prime-order subgroup")
    return point


def g2_to_bytes(p) -> bytes:
    p = g2_normalize(p)
    if p[2] == ZERO2:
        out = bytearray(96)
        out[0] = _FLAG_COMPRESSED | _FLAG_INFINITY
        return bytes(out)
    x0, x1 = p[0]
    out = bytearray(int(x1).to_bytes(48, "big") + int(x0).to_bytes(48, "big"))
    out[0] |= _FLAG_COMPRESSED
    if _y_is_larger_fq2(p[1]):
        out[0] |= _FLAG_SIGN
    return bytes(out)


def g2_from_bytes(data: bytes, check_subgroup: bool = True):
    if len(data) != 96:
        raise ValueError("G2 compressed encoding must be 96 bytes")
    flags = data[0]
    if not flags & _FLAG_COMPRESSED:
        raise ValueError("only compressed encodings supported")
    if flags & _FLAG_INFINITY:
        if any(data[1:]) or flags & _FLAG_SIGN or data[0] & 0x1F:
            raise ValueError("malformed infinity encoding")
        return G2_INF
    x1 = mpz(int.from_bytes(bytes([data[0] & 0x1F]) + data[1:48], "big"))
    x0 = mpz(int.from_bytes(data[48:], "big"))
    if x0 >= P or x1 >= P:
        raise ValueError("x coordinate out of range")
    x = (x0, x1)
    y = fq2_sqrt(fq2_add(fq2_mul(fq2_sqr(x), x), B_G2))
    if y is None:
        raise ValueError("x is not on the twist curve")
    if _y_is_larger_fq2(y) != bool(flags & _FLAG_SIGN):
        y = fq2_neg(y)
    point = (x, y, ONE2)
    if check_subgroup and not g2_in_subgroup(point):
        raise ValueError("point not in the prime-order subgroup")
    return point


# --- Fixed-base precomputation ---------------------------------------------------

class FixedBaseG1:
    """8-bit windowed table for repeated multiplication of one G1 base."""

    def __init__(self, base, bits=256):
        base = g1_normalize(base)
        self.windows = (bits + 7) // 8
        rows = []
        cur = base
        for _ in range(self.windows):
            row = [G1_INF]
            acc = G1_INF
            for _ in range(255):
                acc = g1_add(acc, cur)
                row.append(acc)
            rows.append(g1_batch_normalize(row))
            cur = g1_normalize(g1_mul(cur, 1 << 8))
        self.rows = rows

    def mul(self, k: int):
        acc = G1_INF
        k = int(k)
        for j in range(self.windows):
            d = (k >> (8 * j)) & 0xFF
            if d:
                acc = g1_add_mixed(acc, self.rows[j][d])
        return acc


class FixedBaseG2:
    """8-bit windowed table for repeated multiplication of one G2 base."""

    def __init__(self, base, bits=256):
        base = g2_normalize(base)
        self.windows = (bits + 7) // 8
        rows = []
        cur = base
        for _ in range(self.windows):
            row = [G2_INF]
            acc = G2_INF
            for _ in range(255):
                acc = g2_add(acc, cur)
                row.append(g2_normalize(acc))
            rows.append(row)
            cur = g2_normalize(g2_mul(cur, 1 << 8))
        self.rows = rows

    def mul(self, k: int):
        acc = G2_INF
        k = int(k)
        for j in range(self.windows):
            d = (k >> (8 * j)) & 0xFF
            if d:
                acc = g2_add(acc, self.rows[j][d])
        return acc
