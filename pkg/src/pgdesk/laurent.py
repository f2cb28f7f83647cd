"""Truncated Laurent polynomials in pi over PAdic scalars.

This is the desk model of the power-series / annulus rings: a coefficient
window [lo, hi] with an explicit tail flag recording that content above the
exact top was discarded.  The operators phi (pi -> (1+pi)^p - 1), the Gamma
action (pi -> (1+pi)^c - 1 via the binomial series), psi (the normalized
trace splitting), t = log(1+pi), the residue, and the residue pairing all
live here.

Exactness bookkeeping: every series knows the exponent up to which its
content is exact (`exact_top`); operations compute exactly on the windows
they claim and never silently pollute low-order coefficients.
"""

from __future__ import annotations

import math

from .padic import PAdic, PrecisionError, teichmuller_lift, vp_int


class WindowError(ValueError):
    """Operation leaves the representable exponent window."""


class TruncatedLaurent:
    """Laurent polynomial sum of c_e pi^e, e in [lo, hi], PAdic coefficients.

    tail=True means the true object has (unknown, discarded) content above
    `hi`; the stored coefficients are exact regardless.
    """

    __slots__ = ("p", "prec", "lo", "hi", "coeffs", "tail")

    def __init__(self, p, prec, lo, hi, coeffs=None, tail=False):
        if lo > hi:
            raise WindowError(f"empty window [{lo}, {hi}]")
        self.p = p
        self.prec = prec
        self.lo = lo
        self.hi = hi
        self.tail = tail
        cleaned = {}
        if coeffs:
            for e, c in coeffs.items():
                if not (lo <= e <= hi):
                    raise WindowError(f"exponent {e} outside window [{lo}, {hi}]")
                if isinstance(c, int):
                    c = PAdic.from_int(c, p, prec)
                if not c.is_zero():
                    cleaned[e] = c
        self.coeffs = cleaned

    # ---------------- constructors ----------------

    @classmethod
    def zero(cls, p, prec, lo=0, hi=0):
        return cls(p, prec, lo, hi)

    @classmethod
    def one(cls, p, prec, lo=0, hi=0):
        return cls(p, prec, min(lo, 0), max(hi, 0), {0: PAdic.one(p, prec)})

    @classmethod
    def monomial(cls, p, prec, e, coeff=1):
        return cls(p, prec, e, e, {e: coeff})

    def copy_window(self, lo, hi, tail=None):
        """Restrict/extend the window, discarding content above hi."""
        dropped = any(e > hi for e in self.coeffs)
        c = {e: v for e, v in self.coeffs.items() if lo <= e <= hi}
        if any(e < lo for e in self.coeffs):
            raise WindowError("cannot discard pole-side content")
        t = self.tail or dropped if tail is None else tail
        return TruncatedLaurent(self.p, self.prec, lo, hi, c, t)

    # ---------------- queries ----------------

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def min_exp(self):
        """Smallest exponent with nonzero coefficient; None for zero."""
        return min(self.coeffs) if self.coeffs else None

    def exact_top(self):
        """Largest exponent whose coefficient is fully determined."""
        return self.hi if self.tail else math.inf

    def coeff(self, e):
        c = self.coeffs.get(e)
        return c if c is not None else PAdic.zero(self.p, self.prec)

    def min_coeff_valuation(self):
        """Smallest coefficient valuation over the window; None if zero."""
        vals = [c.valuation().value for c in self.coeffs.values()]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return NotImplemented
        exps = set(self.coeffs) | set(other.coeffs)
        return all((self.coeff(e) - other.coeff(e)).is_zero() for e in exps)

    def __repr__(self):
        terms = ", ".join(f"{e}: {c.mantissa}{'/p^' + str(c.denom_exp) if c.denom_exp else ''}"
                          for e, c in sorted(self.coeffs.items())[:6])
        dots = ", ..." if len(self.coeffs) > 6 else ""
        t = ", tail" if self.tail else ""
        return f"Laurent[{self.lo},{self.hi}]({terms}{dots}{t})"

    # ---------------- ring operations ----------------

    def _check_compat(self, other):
        if self.p != other.p:
            raise ValueError("mismatched primes")

    def __add__(self, other):
        if isinstance(other, (int, PAdic)):
            other = TruncatedLaurent(self.p, self.prec, 0, 0, {0: other})
        self._check_compat(other)
        lo = min(self.lo, other.lo)
        top = min(self.exact_top(), other.exact_top())
        hi = max(self.hi, other.hi) if top is math.inf else int(top)
        hi = max(hi, lo)
        out = {}
        for e in set(self.coeffs) | set(other.coeffs):
            if e > hi:
                continue
            s = self.coeff(e) + other.coeff(e)
            if not s.is_zero():
                out[e] = s
        return TruncatedLaurent(self.p, self.prec, lo, hi,
                                out, tail=self.tail or other.tail)

    def __neg__(self):
        return TruncatedLaurent(self.p, self.prec, self.lo, self.hi,
                                {e: -c for e, c in self.coeffs.items()}, self.tail)

    def __sub__(self, other):
        if isinstance(other, (int, PAdic)):
            other = TruncatedLaurent(self.p, self.prec, 0, 0, {0: other})
        return self + (-other)

    def scale(self, a):
        """Multiply by a scalar (int or PAdic; ints coerce losslessly)."""
        out = {}
        for e, c in self.coeffs.items():
            v = c * a
            if not v.is_zero():
                out[e] = v
        return TruncatedLaurent(self.p, self.prec, self.lo, self.hi, out, self.tail)

    def shift(self, k):
        """Multiply by pi^k."""
        return TruncatedLaurent(self.p, self.prec, self.lo + k, self.hi + k,
                                {e + k: c for e, c in self.coeffs.items()}, self.tail)


def series_mul(f: TruncatedLaurent, g: TruncatedLaurent) -> TruncatedLaurent:
    """Product, exact on the window both factors can certify."""
    f._check_compat(g)
    lo = f.lo + g.lo
    tops = []
    tf, tg = f.exact_top(), g.exact_top()
    if tf is math.inf and tg is math.inf:
        hi, tail = f.hi + g.hi, False
    else:
        if tf is not math.inf:
            tops.append(int(tf) + g.lo)
        if tg is not math.inf:
            tops.append(int(tg) + f.lo)
        hi, tail = min(tops), True
    hi = max(hi, lo)
    out = {}
    for e1, c1 in f.coeffs.items():
        for e2, c2 in g.coeffs.items():
            e = e1 + e2
            if lo <= e <= hi:
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
    out = {e: c for e, c in out.items() if not c.is_zero()}
    return TruncatedLaurent(f.p, min(f.prec, g.prec), lo, hi, out, tail)


def series_invert(f: TruncatedLaurent, hi_out: int | None = None) -> TruncatedLaurent:
    """Inverse of f = pi^m * u with u having a unit constant coefficient.

    Exact on [-m, hi_out]; hi_out defaults to the largest exactly
    computable top, f.exact_top() - 2m for truncated input.
    """
    m = f.min_exp()
    if m is None:
        raise ZeroDivisionError("inverting zero series")
    c0 = f.coeff(m)
    if c0.is_zero():
        raise PrecisionError("no leading coefficient resolvable at precision")
    tf = f.exact_top()
    if hi_out is None:
        hi_out = f.hi - 2 * m
    order = hi_out + m  # need u^{-1} to this order
    if tf is not math.inf and order > tf - m:
        raise WindowError("inverse requested beyond exactly known content")
    inv0 = c0.inverse()
    # u = f / (c0 pi^m) has constant term 1; denominators may accumulate
    u = {e - m: c * inv0 for e, c in f.coeffs.items()}
    inv = {0: PAdic.one(f.p, inv0.prec + inv0.denom_exp)}
    for k in range(1, order + 1):
        s = None
        for j in range(1, k + 1):
            if j in u and (k - j) in inv:
                t = u[j] * inv[k - j]
                s = t if s is None else s + t
        if s is not None and not s.is_zero():
            inv[k] = -s
    out = {}
    for e, c in inv.items():
        if e <= order:
            v = c * inv0
            if not v.is_zero():
                out[e - m] = v
    return TruncatedLaurent(f.p, f.prec, -m, hi_out, out, tail=True)


# ---------------- substitution operators ----------------


def _subst(f: TruncatedLaurent, builder, hi_out: int, tail: bool) -> TruncatedLaurent:
    """f(P(pi)) where builder(top) yields P exactly to that top, v_pi(P) = 1.

    Negative powers of P are computed with headroom so the output is exact
    on [f.lo, hi_out]."""
    if f.is_zero():
        return TruncatedLaurent(f.p, f.prec, f.lo, max(f.lo, hi_out), tail=tail)
    m = max(0, -f.min_exp())
    # powers carry guard digits so coefficients of f with denominators keep
    # their full absolute precision through the products
    gmax = max(c.denom_exp for c in f.coeffs.values()) + 1
    acc = {}

    def add_in(pw, scalar):
        for e, c in pw.coeffs.items():
            if e > hi_out:
                continue
            v = c * scalar
            acc[e] = acc[e] + v if e in acc else v

    pos = sorted(e for e in f.coeffs if e >= 0)
    neg = sorted((e for e in f.coeffs if e < 0), reverse=True)
    if pos:
        ptop = max(hi_out, 1)
        P = builder(ptop, f.prec + gmax)
        cur, cur_e = TruncatedLaurent.one(f.p, f.prec + gmax, 0, ptop), 0
        for e in pos:
            while cur_e < e:
                cur = series_mul(cur, P).copy_window(0, ptop, tail=False)
                cur_e += 1
            add_in(cur, f.coeffs[e])
    if neg:
        # Q^k only feeds the band [-k, hi_out], so the chain needs tops
        # hi_out + m - k; running everything at top hi_out + m keeps each
        # intermediate exact while avoiding needless deep denominators.
        ntop = max(hi_out + m, 1 - m)
        P = builder(ntop + m + 1, f.prec + gmax)
        Q = series_invert(P, hi_out=ntop)
        Q = TruncatedLaurent(f.p, Q.prec, Q.lo, Q.hi, Q.coeffs, tail=False)
        cur, cur_e = Q, -1
        for e in neg:
            while cur_e > e:
                cur = series_mul(cur, Q)
                cur = TruncatedLaurent(f.p, cur.prec, cur.lo, cur.hi, cur.coeffs,
                                       tail=False)
                cur_e -= 1
            add_in(cur, f.coeffs[e])
    acc = {e: c for e, c in acc.items() if not c.is_zero()}
    return TruncatedLaurent(f.p, f.prec, f.lo, max(f.lo, hi_out), acc, tail=tail)


def phi_substitution(p: int, prec: int, top: int) -> TruncatedLaurent:
    """(1+pi)^p - 1, the image of pi under phi (exact polynomial)."""
    coeffs = {k: PAdic.from_int(math.comb(p, k), p, prec) for k in range(1, p + 1)}
    return TruncatedLaurent(p, prec, 1, max(top, p), coeffs)


def _phi_builder(p, base_prec):
    def build(top, prec=None):
        return phi_substitution(p, prec or base_prec, top)
    return build


def frobenius_series(f: TruncatedLaurent, cap: int | None = None) -> TruncatedLaurent:
    """phi(f): substitute pi -> (1+pi)^p - 1.

    With no cap the output is exact to p * exact_top (finite input) or to
    exact_top (tailed input).  A cap raises WindowError instead of silently
    truncating; use .copy_window afterwards when truncation is intended.
    """
    p = f.p
    tf = f.exact_top()
    has_pole = f.min_exp() is not None and f.min_exp() < 0
    if tf is math.inf:
        hi_out = p * max(f.hi, 1 if has_pole else 0)
        tail = has_pole  # phi of a pole is an infinite series
    else:
        hi_out = int(tf)  # unknown input tail pollutes only above exact_top
        tail = True
    if cap is not None and hi_out > cap:
        raise WindowError(f"phi window top {hi_out} exceeds cap {cap}")
    return _subst(f, _phi_builder(p, f.prec), hi_out, tail)


class GammaElement:
    """A unit c in Z_p^*, decomposed as omega(a) * (1+p)^s.

    Carries an exact integer representative at extended precision so that
    binomial coefficients C(c, k) can be taken exactly for large k.
    """

    EXTRA_DIGITS = 160

    def __init__(self, p: int, prec: int, rep: int, rep_prec: int):
        self.p = p
        self.prec = prec
        self.rep_prec = rep_prec
        self.rep = rep % p**rep_prec
        if self.rep % p == 0:
            raise ValueError("Gamma element must be a unit")
        self.a = self.rep % p
        # principal part (1+p)^s: s recovered p-adically at working precision
        om = teichmuller_lift(self.a, p, rep_prec).lift()
        principal = self.rep * pow(om, -1, p**rep_prec) % p**rep_prec
        self.s = _unit_log_ratio(principal, p, prec)

    @classmethod
    def from_unit_int(cls, c: int, p: int, prec: int) -> "GammaElement":
        """Exact integer unit (e.g. 1+p, or a sampled unit)."""
        return cls(p, prec, c, prec + cls.EXTRA_DIGITS)

    @classmethod
    def principal(cls, p: int, prec: int, s: int = 1) -> "GammaElement":
        """(1+p)^s for integer s: chi(gamma_0) = 1 + p is s = 1."""
        rp = prec + cls.EXTRA_DIGITS
        rep = pow(1 + p, s, p**rp) if s >= 0 else pow(pow(1 + p, -1, p**rp), -s, p**rp)
        return cls(p, prec, rep, rp)

    @classmethod
    def torsion(cls, a: int, p: int, prec: int) -> "GammaElement":
        """omega(a): the Teichmuller unit congruent to a."""
        rp = prec + cls.EXTRA_DIGITS
        return cls(p, prec, teichmuller_lift(a, p, rp).lift(), rp)

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        rp = min(self.rep_prec, other.rep_prec)
        return GammaElement(self.p, self.prec, self.rep * other.rep, rp)

    def inverse(self) -> "GammaElement":
        return GammaElement(self.p, self.prec,
                            pow(self.rep, -1, self.p**self.rep_prec), self.rep_prec)

    def as_padic(self) -> PAdic:
        return PAdic(self.p, self.prec, self.rep)

    def binomial(self, k: int, prec: int | None = None) -> PAdic:
        """C(c, k) exactly from the integer representative."""
        prec = prec or self.prec
        if k == 0:
            return PAdic.one(self.p, prec)
        vfact = vp_int(math.factorial(k), self.p)
        if vfact >= self.rep_prec - prec:
            raise PrecisionError(f"binomial order {k} exceeds guard digits")
        return PAdic(self.p, prec, math.comb(self.rep + self.p**self.rep_prec, k))

    def __repr__(self):
        return f"GammaElement(a={self.a}, s={self.s!r})"


def _unit_log_ratio(principal: int, p: int, prec: int) -> PAdic:
    """s with (1+p)^s = principal, via log(principal)/log(1+p)."""
    digits = prec + 8

    def plog(u):
        x = (u - 1) % p**digits
        acc = PAdic.zero(p, digits)
        xk = 1
        for k in range(1, 2 * digits + 4):
            xk = xk * x % p ** (digits + 4)
            vk = vp_int(k, p) or 0
            unit = k // p**vk
            t = PAdic(p, digits + vk, xk * pow(unit, -1, p ** (digits + vk)) * (-1) ** (k + 1))
            acc = acc + (t.shift(-vk) if vk else t)
        return acc

    lu = plog(principal % p**digits)
    if lu.is_zero():
        return PAdic.zero(p, prec)
    lg = plog((1 + p) % p**digits)
    s = lu / lg
    return s.reduce_prec(min(prec, s.prec))


def gamma_series(f: TruncatedLaurent, c: GammaElement,
                 hi_out: int | None = None) -> TruncatedLaurent:
    """gamma_c(f): substitute pi -> (1+pi)^c - 1 via the binomial series.

    hi_out may extend the output window past f.hi when f is exactly known
    (the binomial tail is computable to any order)."""
    if f.p != c.p:
        raise ValueError("mismatched primes")

    def builder(top, prec=None):
        prec = prec or f.prec
        coeffs = {k: c.binomial(k, prec) for k in range(1, top + 1)}
        return TruncatedLaurent(f.p, prec, 1, top,
                                {k: v for k, v in coeffs.items() if not v.is_zero()},
                                tail=True)

    tf = f.exact_top()
    if hi_out is None:
        hi_out = f.hi
    elif tf is not math.inf and hi_out > int(tf):
        raise WindowError("gamma output window exceeds exactly known content")
    constant_only = set(f.coeffs) <= {0}
    return _subst(f, builder, hi_out, tail=not constant_only)


def log_one_plus_pi(p: int, prec: int, hi: int) -> TruncatedLaurent:
    """t = log(1+pi) = sum (-1)^(n+1) pi^n / n on window [1, hi]."""
    coeffs = {}
    for n in range(1, hi + 1):
        v = vp_int(n, p) or 0
        if v >= prec:
            raise PrecisionError(f"coefficient 1/{n} exhausts precision")
        unit = n // p**v
        c = PAdic(p, prec + v, pow(unit, -1, p**(prec + v)) * (-1) ** (n + 1))
        coeffs[n] = c.shift(-v) if v else c
    return TruncatedLaurent(p, prec, 1, hi, coeffs, tail=True)


def psi_series(f: TruncatedLaurent) -> TruncatedLaurent:
    """psi(f): the normalized-trace left inverse of phi.

    Clears poles with (phi(pi))^m, changes basis to u = 1 + pi, keeps the
    exponents divisible by p, and converts back.  Exact on the full output
    window for exactly known input.
    """
    p, prec = f.p, f.prec
    if f.is_zero():
        return TruncatedLaurent(p, prec, f.lo, f.hi, tail=f.tail)
    m = max(0, -f.min_exp())
    # g = phi(pi)^m * f clears the poles; support in [0, ...]
    if m:
        phipi = phi_substitution(p, prec, p * m)
        pw = TruncatedLaurent.one(p, prec, 0, 0)
        for _ in range(m):
            pw = series_mul(pw, phipi)
        g = series_mul(pw, f)
    else:
        g = f
    g_top = g.hi if g.tail else (max(g.coeffs) if g.coeffs else 0)
    # u-basis: G_k = sum_j g_j C(j,k) (-1)^(j-k)
    G = {}
    for j, cj in g.coeffs.items():
        if j > g_top:
            continue
        for k in range(0, j + 1):
            w = math.comb(j, k) * (-1) ** (j - k)
            t = cj * w
            G[k] = G[k] + t if k in G else t
    # keep k = p*l, convert H0 back to pi: h0_j = sum_l H0_l C(l, j)
    h0 = {}
    for k, ck in G.items():
        if ck.is_zero() or k % p:
            continue
        l = k // p
        for j in range(0, l + 1):
            t = ck * math.comb(l, j)
            h0[j] = h0[j] + t if j in h0 else t
    out_top = (g_top // p) - m
    out = {}
    for e, c in h0.items():
        ee = e - m
        if ee <= out_top and not c.is_zero():
            out[ee] = c
    lo_out = min(f.lo, 0)  # psi spreads positive powers down to exponent 0
    return TruncatedLaurent(p, prec, lo_out, max(out_top, lo_out), out,
                            tail=f.tail)


def trace_phi(f: TruncatedLaurent) -> TruncatedLaurent:
    """Trace of the degree-p extension: Tr = p * phi(psi(f))."""
    return frobenius_series(psi_series(f)).scale(f.p)


def residue(f: TruncatedLaurent) -> PAdic:
    """Coefficient of pi^(-1)."""
    if f.lo > -1:
        raise WindowError("window does not contain exponent -1")
    return f.coeff(-1)


def iwasawa_pairing(f: TruncatedLaurent, g: TruncatedLaurent) -> PAdic:
    """<f, g> = res(f * g * dpi/(1+pi)): the residue form of the duality layer.

    Only the pole band of f*g is convolved, so deep-denominator content at
    high exponents never enters; exact whenever the pole coefficients are."""
    f._check_compat(g)
    p = f.p
    lo = f.lo + g.lo
    if lo > -1:
        return PAdic.zero(p, min(f.prec, g.prec))
    # (f g)_k for k in [lo, -1]
    band = {}
    for e1, c1 in f.coeffs.items():
        for e2, c2 in g.coeffs.items():
            k = e1 + e2
            if k <= -1:
                v = c1 * c2
                band[k] = band[k] + v if k in band else v
    # res(h/(1+pi)) = sum_{j>=0} (-1)^j h_{-1-j}
    acc = PAdic.zero(p, min(f.prec, g.prec))
    for k, c in band.items():
        acc = acc + c * ((-1) ** (-1 - k))
    return acc


# ---------------- serialization ----------------


def laurent_to_json(f: TruncatedLaurent) -> dict:
    return {
        "p": f.p,
        "N": f.prec,
        "lo": f.lo,
        "hi": f.hi,
        "tail": f.tail,
        "coeffs": [[e, c.mantissa, c.denom_exp] for e, c in sorted(f.coeffs.items())],
    }


def laurent_from_json(d: dict) -> TruncatedLaurent:
    coeffs = {e: PAdic(d["p"], d["N"] + de, m, de) for e, m, de in d["coeffs"]}
    return TruncatedLaurent(d["p"], d["N"], d["lo"], d["hi"], coeffs,
                            tail=d.get("tail", False))
