"""Generator profiles: exact supports plus pointwise values.

Verdicts only ever look at ``support()``; values are used for partition
identity checks and for the numeric cross-correlation oracle. Every profile
is required to be non-zero almost everywhere on the interior of its support,
which makes the support of a periodized ``|p|^2`` equal to the periodized
support.

All profiles are one-dimensional except :class:`Characteristic`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bands import (
    BandSet,
    RationalBox,
    affine_map,
    as_fraction,
    format_band,
    format_fraction,
    normalize,
    parse_band,
    union_of,
)
from .errors import ParseError, UnboundedBand, ZeroFactor

DOMAINS = ("frequency", "time")


def other_domain(domain: str) -> str:
    return "time" if domain == "frequency" else "frequency"


def meyer_nu(t):
    """Degree-7 polynomial bell: 0 below 0, 1 above 1, ``nu(t) + nu(1 - t) = 1``."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)


def smooth_nu(t):
    """C-infinity bell ``s(t) / (s(t) + s(1 - t))`` with ``s(t) = exp(-1/t)``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        s0 = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        u = 1.0 - t
        s1 = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        out = s0 / (s0 + s1)
    return np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, out))


class SpectralProfile:
    """Base class. Subclasses set ``domain`` and implement ``support``/``evaluate``."""

    domain: str = "frequency"
    full_support: bool = False

    def support(self) -> BandSet:
        raise NotImplementedError

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x)

    def breakpoints(self) -> list[Fraction]:
        """Points where the profile may fail to be smooth."""
        return sorted({v for b in self.support().boxes for v in (b.lo[0], b.hi[0])})

    def step_pieces(self):
        """``[(band, |p|^2)]`` when ``|p|^2`` is piecewise constant, else ``None``."""
        return None

    def dilate(self, factor) -> "SpectralProfile":
        return Dilated(self, as_fraction(factor))

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Characteristic(SpectralProfile):
    band: BandSet
    domain: str = "frequency"

    def support(self) -> BandSet:
        return self.band

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for b in self.band.boxes:
            out[(x >= float(b.lo[0])) & (x < float(b.hi[0]))] = 1.0
        return out if out.shape else complex(out)

    def step_pieces(self):
        return [(self.band, Fraction(1))]

    def dilate(self, factor):
        factor = as_fraction(factor)
        if factor == 0:
            raise ZeroFactor("dilation factor must be non-zero")
        return Characteristic(affine_map(self.band, 1 / factor), self.domain)

    def to_dict(self):
        return {"type": "characteristic", "domain": self.domain, "band": format_band(self.band)}


@dataclass(frozen=True)
class MeyerBell(SpectralProfile):
    """Meyer wavelet in frequency, supported on ``[-4/3,-1/3) u [1/3,4/3)``."""

    domain: str = "frequency"

    def support(self):
        return union_of((Fraction(-4, 3), Fraction(-1, 3)), (Fraction(1, 3), Fraction(4, 3)))

    def breakpoints(self):
        return [Fraction(s * k, 3) for s in (-1, 1) for k in (1, 2, 4)]

    def modulus(self, x):
        a = np.abs(np.asarray(x, dtype=float))
        rise = np.sin(np.pi / 2 * meyer_nu(3 * a - 1))
        fall = np.cos(np.pi / 2 * meyer_nu(1.5 * a - 1))
        return np.where((a >= 1 / 3) & (a < 2 / 3), rise, np.where((a >= 2 / 3) & (a < 4 / 3), fall, 0.0))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(1j * np.pi * x) * self.modulus(x)
        return out if out.shape else complex(out)

    def to_dict(self):
        return {"type": "meyer", "domain": self.domain}


@dataclass(frozen=True)
class FrazierJawerth(SpectralProfile):
    """Smooth tight-frame wavelet supported on ``[-1/2,-1/8) u [1/8,1/2)``.

    The transition on ``[1/8, 1/4]`` uses the C-infinity bell
    :func:`smooth_nu`, so ``sum_j |p(2^j xi)|^2 = 1`` for ``xi != 0``.
    """

    domain: str = "frequency"

    def support(self):
        return union_of((Fraction(-1, 2), Fraction(-1, 8)), (Fraction(1, 8), Fraction(1, 2)))

    def breakpoints(self):
        return [Fraction(s, k) for s in (-1, 1) for k in (2, 4, 8)]

    def evaluate(self, x):
        a = np.abs(np.asarray(x, dtype=float))
        rise = np.sin(np.pi / 2 * smooth_nu(8 * a - 1))
        fall = np.cos(np.pi / 2 * smooth_nu(4 * a - 1))
        out = np.where((a >= 1 / 8) & (a < 1 / 4), rise, np.where((a >= 1 / 4) & (a < 1 / 2), fall, 0.0))
        out = out.astype(complex)
        return out if out.shape else complex(out)

    def to_dict(self):
        return {"type": "fj", "domain": self.domain}


@dataclass(frozen=True)
class PiecewisePoly(SpectralProfile):
    """Polynomial on each interval; coefficients in increasing degree."""

    pieces: tuple[tuple[RationalBox, tuple[Fraction, ...]], ...]
    domain: str = "frequency"

    def __post_init__(self):
        pieces = []
        for b, coeffs in self.pieces:
            coeffs = tuple(as_fraction(c) for c in coeffs)
            if not any(coeffs):
                raise ValueError(f"zero polynomial on {b}; profiles must be non-zero a.e. on their support")
            pieces.append((b, coeffs))
        object.__setattr__(self, "pieces", tuple(pieces))
        normalize([b for b, _ in pieces], 1)

    @classmethod
    def constant(cls, pairs: Sequence, domain: str = "frequency") -> "PiecewisePoly":
        """From ``[((lo, hi), value), ...]``."""
        return cls(tuple((RationalBox.interval(lo, hi), (v,)) for (lo, hi), v in pairs), domain)

    def support(self):
        return normalize([b for b, _ in self.pieces], 1)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for b, coeffs in self.pieces:
            mask = (x >= float(b.lo[0])) & (x < float(b.hi[0]))
            out[mask] = np.polynomial.polynomial.polyval(x[mask], [float(c) for c in coeffs])
        return out if out.shape else complex(out)

    def is_constant(self) -> bool:
        return all(len(c) == 1 or not any(c[1:]) for _, c in self.pieces)

    def step_pieces(self):
        if not self.is_constant():
            return None
        return [(normalize([b], 1), c[0] * c[0]) for b, c in self.pieces]

    def dilate(self, factor):
        factor = as_fraction(factor)
        if factor == 0:
            raise ZeroFactor("dilation factor must be non-zero")
        out = []
        for b, coeffs in self.pieces:
            lo, hi = b.lo[0] / factor, b.hi[0] / factor
            out.append((RationalBox.interval(min(lo, hi), max(lo, hi)),
                        tuple(c * factor**k for k, c in enumerate(coeffs))))
        return PiecewisePoly(tuple(out), self.domain)

    def to_dict(self):
        return {
            "type": "piecewise",
            "domain": self.domain,
            "pieces": [
                {"interval": str(b), "coeffs": [format_fraction(c) for c in coeffs]}
                for b, coeffs in self.pieces
            ],
        }


@dataclass(frozen=True)
class Bump(SpectralProfile):
    """C-infinity bump ``exp(-1 / (1 - t^2))`` on each interval of ``band``."""

    band: BandSet
    domain: str = "frequency"

    def support(self):
        return self.band

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=float)
        for b in self.band.boxes:
            lo, hi = float(b.lo[0]), float(b.hi[0])
            t = (2 * x - lo - hi) / (hi - lo)
            inside = np.abs(t) < 1
            with np.errstate(divide="ignore", over="ignore"):
                out[inside] = np.e * np.exp(-1.0 / (1.0 - t[inside] ** 2))
        out = out.astype(complex)
        return out if out.shape else complex(out)

    def dilate(self, factor):
        factor = as_fraction(factor)
        if factor == 0:
            raise ZeroFactor("dilation factor must be non-zero")
        return Bump(affine_map(self.band, 1 / factor), self.domain)

    def to_dict(self):
        return {"type": "bump", "domain": self.domain, "band": format_band(self.band)}


@dataclass(frozen=True)
class Dilated(SpectralProfile):
    """``p(factor * x)``; support scales by ``1 / factor``."""

    base: SpectralProfile
    factor: Fraction

    def __post_init__(self):
        if self.factor == 0:
            raise ZeroFactor("dilation factor must be non-zero")
        if isinstance(self.base, Dilated):
            object.__setattr__(self, "factor", self.base.factor * self.factor)
            object.__setattr__(self, "base", self.base.base)

    @property
    def domain(self):
        return self.base.domain

    @property
    def full_support(self):
        return self.base.full_support

    def support(self):
        return affine_map(self.base.support(), 1 / self.factor)

    def breakpoints(self):
        return sorted(b / self.factor for b in self.base.breakpoints())

    def evaluate(self, x):
        return self.base.evaluate(float(self.factor) * np.asarray(x, dtype=float))

    def step_pieces(self):
        pieces = self.base.step_pieces()
        if pieces is None:
            return None
        return [(affine_map(b, 1 / self.factor), w) for b, w in pieces]

    def dilate(self, factor):
        return Dilated(self.base, self.factor * as_fraction(factor))

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["dilation"] = format_fraction(self.factor * as_fraction(d.get("dilation", 1)))
        return d


@dataclass(frozen=True)
class FourierDual(SpectralProfile):
    """Fourier transform of a compactly supported profile, in the other domain.

    A non-zero compactly supported function has an entire Fourier transform,
    whose zero set is null; the support is therefore all of the line and the
    periodized support is the whole torus. Values are available in closed
    form for piecewise-constant bases.
    """

    base: SpectralProfile
    full_support = True

    @property
    def domain(self):
        return other_domain(self.base.domain)

    def support(self):
        raise UnboundedBand("Fourier transform of a compactly supported profile has unbounded support")

    def breakpoints(self):
        return []

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        pieces = self.base.step_pieces() if isinstance(self.base, (Characteristic, PiecewisePoly)) else None
        if pieces is None:
            raise NotImplementedError("closed-form transform needs a piecewise-constant base")
        # forward transform from time to frequency uses exp(-2 pi i x t); inverse uses +
        sign = -1.0 if self.base.domain == "time" else 1.0
        out = np.zeros(x.shape, dtype=complex)
        if isinstance(self.base, Characteristic):
            terms = [(b, 1.0) for b in self.base.band.boxes]
        else:
            terms = [(b, float(c[0])) for b, c in self.base.pieces]
        small = np.abs(x) < 1e-12
        xs = np.where(small, 1.0, x)
        for b, c in terms:
            lo, hi = float(b.lo[0]), float(b.hi[0])
            w = 2j * np.pi * sign * xs
            val = (np.exp(w * hi) - np.exp(w * lo)) / w
            out += c * np.where(small, hi - lo, val)
        return out if out.shape else complex(out)

    def to_dict(self):
        return {"type": "fourier", "of": self.base.to_dict()}


@dataclass(frozen=True)
class SincSum(SpectralProfile):
    """``sum c_j sinc(B (x - x_j))``: band-limited to ``[-B/2, B/2)``, unbounded support."""

    coeffs: tuple[complex, ...]
    centers: tuple[float, ...]
    bandwidth: float
    domain: str = "time"
    full_support = True

    def support(self):
        raise UnboundedBand("sinc sums have unbounded support")

    def breakpoints(self):
        return []

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for c, x0 in zip(self.coeffs, self.centers):
            out += c * np.sinc(self.bandwidth * (x - x0))
        return out if out.shape else complex(out)


@dataclass(frozen=True)
class BumpSum(SpectralProfile):
    """Linear combination of bumps; used as smooth compactly supported test vectors."""

    bumps: tuple[Bump, ...]
    coeffs: tuple[complex, ...]
    domain: str = "frequency"

    def support(self):
        return normalize([b for bump in self.bumps for b in bump.band.boxes], 1)

    def breakpoints(self):
        return sorted({p for bump in self.bumps for p in bump.breakpoints()})

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for c, bump in zip(self.coeffs, self.bumps):
            out += c * bump.evaluate(x)
        return out


def dilate_profile(p: SpectralProfile, factor) -> SpectralProfile:
    """Frequency dilation ``q(xi) = p(factor * xi)``."""
    factor = as_fraction(factor)
    if factor == 0:
        raise ZeroFactor("dilation factor must be non-zero")
    if factor == 1:
        return p
    return p.dilate(factor)


def eval_profile(p: SpectralProfile, x):
    return p.evaluate(x)


def haar_time() -> PiecewisePoly:
    """Haar wavelet as a time-domain step profile."""
    return PiecewisePoly.constant([((0, Fraction(1, 2)), 1), ((Fraction(1, 2), 1), -1)], "time")


def partition_sum(p: SpectralProfile, xi, dilation=2, j_range=range(-60, 61)):
    """``sum_j |p(dilation^j xi)|^2`` over a finite range of scales."""
    xi = np.asarray(xi, dtype=float)
    total = np.zeros(xi.shape)
    d = float(dilation)
    for j in j_range:
        total += np.abs(p.evaluate(d**j * xi)) ** 2
    return total


def odd_shift_sum(p: SpectralProfile, xi, q: int, dilation=2, j_max: int = 60):
    """``sum_{j >= 0} p(d^j xi) conj(p(d^j (xi + q)))``."""
    xi = np.asarray(xi, dtype=float)
    total = np.zeros(xi.shape, dtype=complex)
    d = float(dilation)
    for j in range(j_max + 1):
        total += p.evaluate(d**j * xi) * np.conj(p.evaluate(d**j * (xi + q)))
    return total


def profile_from_dict(d: dict) -> SpectralProfile:
    """Build a profile from its spec-file description."""
    d = dict(d)
    kind = d.pop("type", None)
    dilation = d.pop("dilation", None)
    domain = d.pop("domain", "frequency")
    if domain not in DOMAINS:
        raise ParseError(f"unknown domain {domain!r}", key="domain")
    if kind == "characteristic":
        p = Characteristic(parse_band(_need(d, "band")), domain)
    elif kind == "bump":
        p = Bump(parse_band(_need(d, "band"), 1), domain)
    elif kind == "meyer":
        p = MeyerBell(domain)
    elif kind == "fj":
        p = FrazierJawerth(domain)
    elif kind == "piecewise":
        pieces = []
        for item in _need(d, "pieces"):
            band = parse_band(item["interval"], 1)
            if len(band.boxes) != 1:
                raise ParseError(f"piece {item['interval']!r} must be a single interval", key="pieces")
            pieces.append((band.boxes[0], tuple(as_fraction(c) for c in item["coeffs"])))
        p = PiecewisePoly(tuple(pieces), domain)
    elif kind == "fourier":
        p = FourierDual(profile_from_dict(_need(d, "of")))
    else:
        raise ParseError(f"unknown profile type {kind!r}", key="type")
    for k in ("band", "pieces", "of"):
        d.pop(k, None)
    if d:
        raise ParseError(f"unknown profile keys {sorted(d)}", key=sorted(d)[0])
    if dilation is not None:
        p = dilate_profile(p, dilation)
    return p


def _need(d, key):
    if key not in d:
        raise ParseError(f"missing profile key {key!r}", key=key)
    return d[key]
