"""Butcher tableau pairs for implicit-explicit Runge-Kutta methods.

A method is stored as a pair of square tableaux of the same size: the
diagonally implicit part ``(A, b)`` and the explicit part ``(Ahat,
bhat)``.  Methods are shipped as plain-text data files (one method per
file, see ``data/tableaux``) with the following schema::

    # comment lines start with '#'
    name <display name>
    form <I or II>        # which segregated step family targets it
    order <p>             # classical order of the pair
    A                     # s lines of s entries follow
    <row 1>
    ...
    b
    <s entries>
    Ahat
    <rows>
    bhat
    <entries>

Entries are rational numbers like ``-1743/31250`` or decimal literals;
rationals are parsed exactly and converted to binary floating point
once.

The module also provides the structural analysis used by the stepping
code: classification (fully implicit diagonal = type A; zero first
stage = type CK; CK with a zero first implicit column = type ARS), the
weight vector ``d`` that annihilates the implicit rows, the explicit
stability function, and the maximum stable step on the imaginary axis
(advective CFL limit) of the explicit part.
"""

import importlib.resources
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


@dataclass
class Tableau:
    name: str
    form: str  # "I" or "II"
    order: int
    A: np.ndarray
    b: np.ndarray
    Ahat: np.ndarray
    bhat: np.ndarray
    meta: dict = field(default_factory=dict)

    # -- basic structure ---------------------------------------------------

    @property
    def stages(self):
        return self.A.shape[0]

    @property
    def c(self):
        return self.A.sum(axis=1)

    @property
    def chat(self):
        return self.Ahat.sum(axis=1)

    @property
    def kind(self):
        """'A' (invertible SDIRK), 'CK' (zero first stage) or 'ARS'."""
        A = self.A
        diag = np.diag(A)
        if abs(diag[0]) > 0 and np.allclose(diag, diag[0], rtol=0, atol=1e-14):
            return "A"
        if np.all(A[0] == 0) and np.all(np.abs(diag[1:] - diag[-1]) < 1e-14) and diag[-1] > 0:
            if np.all(A[1:, 0] == 0) and self.b[0] == 0:
                return "ARS"
            return "CK"
        raise ValueError(f"{self.name}: tableau is neither type A nor type CK")

    @property
    def a_ss(self):
        """The repeated implicit diagonal entry."""
        return float(self.A[-1, -1])

    @property
    def stiffly_accurate(self):
        return bool(np.allclose(self.A[-1], self.b, rtol=0, atol=1e-14))

    @property
    def pressure_order_count(self):
        """Number of genuinely implicit stages (pressure sub-steps)."""
        return self.stages if self.kind == "A" else self.stages - 1

    def d_vector(self):
        """Weights with d_1 = 1 and sum_k a_jk d_k = 0 for j >= 2."""
        s = self.stages
        d = np.zeros(s)
        d[0] = 1.0
        for j in range(1, s):
            d[j] = -np.dot(self.A[j, :j], d[:j]) / self.A[j, j]
        return d

    def theta(self):
        """Mismatch weight sum(bhat_k d_k); zero when b == bhat."""
        return float(np.dot(self.bhat, self.d_vector()))

    # -- explicit stability ------------------------------------------------

    def explicit_stability_coeffs(self):
        """Coefficients m_k of R(z) = 1 + sum_k m_k z^k (explicit part)."""
        s = self.stages
        coeffs = []
        v = np.ones(s)
        for _ in range(s):
            coeffs.append(float(np.dot(self.bhat, v)))
            v = self.Ahat @ v
        return np.array(coeffs)

    def explicit_stability(self, z):
        m = self.explicit_stability_coeffs()
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        zp = np.ones_like(z)
        for mk in m:
            zp = zp * z
            out = out + mk * zp
        return out

    def cfl_max(self, tol=1e-12, scan_step=1e-3, scan_limit=100.0):
        """Largest L with |R(i mu)| <= 1 + tol for all mu in [0, L]."""
        mus = np.arange(scan_step, scan_limit + scan_step, scan_step)
        vals = np.abs(self.explicit_stability(1j * mus))
        bad = np.flatnonzero(vals > 1.0 + tol)
        if bad.size == 0:
            return float(scan_limit)
        if bad[0] == 0:
            return 0.0
        lo = mus[bad[0] - 1]
        hi = mus[bad[0]]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if abs(self.explicit_stability(1j * mid)) > 1.0 + tol:
                hi = mid
            else:
                lo = mid
        return float(lo)

    # -- order conditions ----------------------------------------------------

    def order_condition_residuals(self):
        """Residuals of the additive (coupled) order conditions up to
        ``order``, treating the pair as an additive Runge-Kutta method.

        The implicit part uses abscissae ``c`` and the explicit part
        ``chat`` (they coincide for the CK/ARS methods used here, but
        differ for type A pairs).  Returns a dict name -> residual.
        """
        res = {}
        c, ch = self.c, self.chat
        b, bh, A, Ah = self.b, self.bhat, self.A, self.Ahat
        res["sum b"] = float(np.sum(b) - 1.0)
        res["sum bhat"] = float(np.sum(bh) - 1.0)
        weights = (("b", b), ("bhat", bh))
        absc = (("c", c), ("chat", ch))
        mats = (("A", A), ("Ahat", Ah))
        if self.order >= 2:
            for wn, w in weights:
                for xn, x in absc:
                    res[f"{wn}.{xn}"] = float(np.dot(w, x) - 0.5)
        if self.order >= 3:
            for wn, w in weights:
                for i, (xn, x) in enumerate(absc):
                    for yn, y in absc[i:]:
                        res[f"{wn}.({xn}*{yn})"] = float(np.dot(w, x * y) - 1.0 / 3.0)
                for mn, M in mats:
                    for xn, x in absc:
                        res[f"{wn}.{mn}.{xn}"] = float(w @ (M @ x) - 1.0 / 6.0)
        return res


# -- parsing ---------------------------------------------------------------


def _parse_entry(tok):
    if "/" in tok:
        return float(Fraction(tok))
    return float(tok)


def parse_tableau(text, source=""):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    fields = {}
    i = 0
    while i < len(lines):
        key, _, rest = lines[i].partition(" ")
        key = key.strip()
        if key in ("name", "form", "order"):
            fields[key] = rest.strip()
            i += 1
        elif key in ("A", "Ahat", "b", "bhat"):
            if key in ("b", "bhat"):
                i += 1
                fields[key] = [_parse_entry(t) for t in lines[i].split()]
                i += 1
            else:
                rows = []
                i += 1
                while i < len(lines) and lines[i].split()[0] not in (
                    "A",
                    "Ahat",
                    "b",
                    "bhat",
                    "name",
                    "form",
                    "order",
                ):
                    rows.append([_parse_entry(t) for t in lines[i].split()])
                    i += 1
                fields[key] = rows
        else:
            raise ValueError(f"{source}: unrecognized line {lines[i]!r}")
    for req in ("name", "form", "order", "A", "b", "Ahat", "bhat"):
        if req not in fields:
            raise ValueError(f"{source}: missing field {req!r}")
    s = len(fields["b"])

    def square(rows, label):
        M = np.zeros((s, s))
        if len(rows) not in (s, s - 1):
            raise ValueError(f"{source}: {label} must have {s} (or {s}-1) rows")
        offset = s - len(rows)
        for r, row in enumerate(rows):
            if len(row) > s:
                raise ValueError(f"{source}: row too long in {label}")
            M[r + offset, : len(row)] = row
        return M

    return Tableau(
        name=fields["name"],
        form=fields["form"],
        order=int(fields["order"]),
        A=square(fields["A"], "A"),
        b=np.array(fields["b"]),
        Ahat=square(fields["Ahat"], "Ahat"),
        bhat=np.array(fields["bhat"]),
        meta={"source": source},
    )


def _data_dir():
    return importlib.resources.files("srkflow") / "data" / "tableaux"


def available_schemes():
    return sorted(
        p.name[: -len(".tab")] for p in _data_dir().iterdir() if p.name.endswith(".tab")
    )


_ALIASES = {}


def _canon(name):
    key = "".join(ch for ch in name.lower() if ch.isalnum())
    return _ALIASES.get(key, key)


def load_tableau(name):
    """Load a method by display name or by data-file stem."""
    want = _canon(name)
    for p in _data_dir().iterdir():
        if not p.name.endswith(".tab"):
            continue
        if _canon(p.name[: -len(".tab")]) == want:
            return parse_tableau(p.read_text(), source=p.name)
    # fall back to matching the declared display names
    for p in _data_dir().iterdir():
        if not p.name.endswith(".tab"):
            continue
        tab = parse_tableau(p.read_text(), source=p.name)
        if _canon(tab.name) == want:
            return tab
    raise KeyError(f"unknown scheme {name!r}; available: {available_schemes()}")


def load_all():
    return [parse_tableau(p.read_text(), source=p.name) for p in sorted(
        _data_dir().iterdir(), key=lambda p: p.name) if p.name.endswith(".tab")]
