"""State reconstruction from two-basis coincidence records.

Coincidence counting behind polarizers fixes the amplitude magnitudes but
says nothing about phases.  Repeating the measurement in the 45-degree
polarizer frame adds interference information: the rotated magnitudes obey
a small set of cosine equations in the original phases.  This module turns
a (natural, rotated45) record pair into magnitude estimates and solves those
equations for the phases by an exhaustive torus grid search refined with
local least squares.

Phase conventions (gauges):

* qutrit: the middle amplitude C2 is taken real and non-negative; the two
  remaining unknowns are the phases of C1 and C3.
* ququart: only phase differences are observable, so the four phases are
  reported with their sum fixed to zero (restricted to the amplitudes above
  the zero threshold when some vanish).

Two-basis data does not always pin the state uniquely.  Complex conjugation
of all phases never changes any measured magnitude, so every solution comes
with its mirror; depending on the magnitudes the cosine system can admit
further discrete solutions that agree with all observations yet differ in
concurrence.  All solutions below the residual threshold are therefore
returned, the canonical one first (lexicographically smallest phases modulo
2 pi), the rest as alternates.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .jsonio import complex_to_json
from .measurement import BASES, QUTRIT_SETTINGS, QUQUART_SETTINGS
from .qutrit import QutritState
from .ququart import QuquartState

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi

# no solution below this root-mean-square mismatch means the record pair is
# inconsistent (corrupted or not from one state)
RESIDUAL_CEILING = 0.05

# |C| below this counts as zero in ideal records; sampled records use three
# statistical sigmas instead (capped, so a tiny record cannot zero everything)
IDEAL_ZERO_MAG = 1e-4
SAMPLED_ZERO_CAP = 0.3

# grid resolutions for the torus search
QUTRIT_GRID = 64
QUQUART_GRID = 32

# two solutions closer than this in overlap deficit are the same state
OVERLAP_DEDUPE = 1e-8

# renormalizing the squared magnitudes by more than this is worth a warning
RENORM_WARN = 0.05


class IncompleteRecord(ValueError):
    """A required polarizer setting or basis is missing."""


class MalformedRecord(ValueError):
    """Counts are negative, empty or otherwise unusable."""


class Inconsistent(RuntimeError):
    """No phase assignment reproduces the records within the ceiling.

    For the real-amplitude shortcut this also flags a quadratic form pushed
    out of its allowed range by noise; the attribute ``clipped`` then carries
    the quantifiers computed from the clipped value.
    """

    def __init__(self, message, best_residual=None, clipped=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.clipped = clipped


class PhaseUnobservable(RuntimeError):
    """Some phase information cannot be recovered from the records.

    The attribute ``result`` carries the partial reconstruction: unobservable
    phases are pinned to zero and everything observable is solved as usual.
    Magnitude-derived quantifiers in the partial result remain exact.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass
class MagnitudeEstimate:
    """Amplitude magnitudes recovered from records in one or both bases.

    magnitudes / magnitudes45 are the natural- and rotated-frame magnitude
    vectors (None until the matching record has been folded in), each
    renormalized to unit squared sum.  renorm maps basis name to the squared
    sum before renormalization, noise_scale is the statistical scale
    1/sqrt(total coincidences) for sampled input (0 for ideal).
    """

    kind: str
    magnitudes: np.ndarray = None
    magnitudes45: np.ndarray = None
    renorm: dict = field(default_factory=dict)
    noise_scale: float = 0.0
    warnings: list = field(default_factory=list)


@dataclass
class ReconstructionResult:
    """Reconstructed state plus everything needed to judge it.

    residual is the root-mean-square mismatch of the phase equations at the
    returned state, recomputable from the public equation helpers.
    alternates lists the other admissible solutions in canonical order.
    """

    kind: str
    state: object
    residual: float
    alternates: list
    gauge: str
    warnings: list

    def solutions(self):
        return [self.state] + list(self.alternates)

    def to_dict(self):
        return {
            "schema": "recon/1",
            "kind": self.kind,
            "amplitudes": [complex_to_json(c) for c in self.state.amplitudes],
            "residual": self.residual,
            "alternates": [
                [complex_to_json(c) for c in s.amplitudes] for s in self.alternates
            ],
            "gauge": self.gauge,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# magnitudes from records
# ---------------------------------------------------------------------------

def magnitudes_from_record(rec, kind=None):
    """Extract amplitude magnitudes from one coincidence record.

    The redundant symmetric settings (the two orderings probing the same
    amplitude) are averaged, the squared magnitudes renormalized to unit sum
    and the renormalization factor reported.  Raises IncompleteRecord when a
    required setting is missing and MalformedRecord for negative or empty
    counts.
    """
    if kind is None:
        kind = rec.kind
    if kind not in ("qutrit", "ququart"):
        raise ValueError(f"unknown kind {kind!r}")
    if rec.basis not in BASES:
        raise MalformedRecord(f"record basis {rec.basis!r} is not recognized")
    settings = QUTRIT_SETTINGS if kind == "qutrit" else QUQUART_SETTINGS
    missing = [s for s in settings if s not in rec.counts]
    if missing:
        raise IncompleteRecord(f"record lacks settings {missing} for a {kind}")
    unknown = [s for s in rec.counts if s not in settings]
    if unknown:
        raise MalformedRecord(f"record has settings {unknown} foreign to a {kind}")
    counts = {s: float(rec.counts[s]) for s in settings}
    if any(v < 0 for v in counts.values()):
        raise MalformedRecord("negative coincidence count")
    total = sum(counts.values())
    if total <= 0:
        raise MalformedRecord("record holds no coincidences")
    w = {s: v / total for s, v in counts.items()}
    if kind == "qutrit":
        sq = np.array([w["H|H"], w["H|V"] + w["V|H"], w["V|V"]])
    else:
        sq = np.array(
            [
                w["Hh|Hl"] + w["Hl|Hh"],
                w["Hh|Vl"] + w["Vl|Hh"],
                w["Hl|Vh"] + w["Vh|Hl"],
                w["Vh|Vl"] + w["Vl|Vh"],
            ]
        )
    factor = float(sq.sum())
    mags = np.sqrt(sq / factor)
    warnings = []
    if abs(factor - 1.0) > RENORM_WARN:
        warnings.append(
            f"squared magnitudes renormalized by {factor:.6g} in the {rec.basis} basis"
        )
    noise = 1.0 / math.sqrt(total) if rec.mode == "sampled" else 0.0
    est = MagnitudeEstimate(kind=kind, renorm={rec.basis: factor},
                            noise_scale=noise, warnings=warnings)
    if rec.basis == "natural":
        est.magnitudes = mags
    else:
        est.magnitudes45 = mags
    return est


def merge_estimates(a, b):
    """Combine two single-basis estimates into one two-basis estimate."""
    if a.kind != b.kind:
        raise ValueError(f"cannot merge a {a.kind} estimate with a {b.kind} one")
    have_a = a.magnitudes is not None
    have_b = b.magnitudes is not None
    if have_a == have_b:
        raise ValueError("need one natural-basis and one rotated-basis estimate")
    nat, rot = (a, b) if have_a else (b, a)
    return MagnitudeEstimate(
        kind=a.kind,
        magnitudes=nat.magnitudes,
        magnitudes45=rot.magnitudes45,
        renorm={**nat.renorm, **rot.renorm},
        noise_scale=max(a.noise_scale, b.noise_scale),
        warnings=list(nat.warnings) + list(rot.warnings),
    )


def _require_both(est):
    if est.magnitudes is None or est.magnitudes45 is None:
        raise IncompleteRecord(
            "phase recovery needs magnitudes in both the natural and the "
            "rotated45 basis"
        )


def _zero_threshold(est):
    if est.noise_scale > 0.0:
        return min(3.0 * est.noise_scale, SAMPLED_ZERO_CAP)
    return IDEAL_ZERO_MAG


def _keep_threshold(best, noise_scale):
    # keep every minimum statistically indistinguishable from the best one
    return max(1e-6 + 10.0 * noise_scale, best * 1.5 + 1e-15)


# ---------------------------------------------------------------------------
# phase equations (public so callers can recompute residuals)
# ---------------------------------------------------------------------------

def qutrit_phase_equations(m, m45, phi1, phi3):
    """Mismatch of the two rotated-frame magnitude equations for a qutrit.

    With magnitudes m = (|C1|, |C2|, |C3|) and rotated magnitudes m45, and
    C2 real by gauge, the rotated middle and outer magnitudes satisfy

        |C2(45)|^2        = (|C1|^2 + |C3|^2)/2 - |C1||C3| cos(phi1 - phi3)
        |C1(45)|^2 - |C3(45)|^2 = sqrt(2) |C2| (|C1| cos phi1 + |C3| cos phi3)

    Returns the two left-minus-right mismatches; both vanish at any phase
    assignment consistent with the data.  Accepts scalar or array phases.
    """
    m1, m2, m3 = m
    n1, n2, n3 = m45
    e1 = 0.5 * (m1 * m1 + m3 * m3) - m1 * m3 * np.cos(phi1 - phi3) - n2 * n2
    e2 = SQRT2 * m2 * (m1 * np.cos(phi1) + m3 * np.cos(phi3)) - (n1 * n1 - n3 * n3)
    return e1, e2


def ququart_phase_equations(m, m45, phases):
    """Mismatch of the three rotated-frame magnitude equations for a ququart.

    Each equation ties one pairing of the four amplitudes to a combination
    of two rotated magnitudes:

        |C1||C3| cos(p1-p3) + |C2||C4| cos(p2-p4) = |C1(45)|^2 + |C2(45)|^2 - 1/2
        |C1||C2| cos(p1-p2) + |C3||C4| cos(p3-p4) = |C1(45)|^2 + |C3(45)|^2 - 1/2
        |C1||C4| cos(p1-p4) + |C2||C3| cos(p2-p3) = |C1(45)|^2 + |C4(45)|^2 - 1/2

    phases is a sequence (p1, p2, p3, p4) of scalars or broadcastable arrays;
    only differences enter, so the overall phase is pure gauge.
    """
    m1, m2, m3, m4 = m
    n1, n2, n3, n4 = m45
    p1, p2, p3, p4 = phases
    e1 = m1 * m3 * np.cos(p1 - p3) + m2 * m4 * np.cos(p2 - p4) - (n1 * n1 + n2 * n2 - 0.5)
    e2 = m1 * m2 * np.cos(p1 - p2) + m3 * m4 * np.cos(p3 - p4) - (n1 * n1 + n3 * n3 - 0.5)
    e3 = m1 * m4 * np.cos(p1 - p4) + m2 * m3 * np.cos(p2 - p3) - (n1 * n1 + n4 * n4 - 0.5)
    return e1, e2, e3


def _rms(eqs):
    acc = None
    for e in eqs:
        acc = e * e if acc is None else acc + e * e
    return np.sqrt(acc / len(eqs))


# ---------------------------------------------------------------------------
# torus grid search with local refinement
# ---------------------------------------------------------------------------

def _wrap(x):
    return (np.asarray(x, dtype=float) + math.pi) % TWO_PI - math.pi


def _lm_polish(resid_fn, x0):
    sol = least_squares(
        resid_fn, x0, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14,
        max_nfev=400,
    )
    return _wrap(sol.x), float(np.sqrt(np.mean(sol.fun ** 2)))


def _numeric_jacobian(resid_fn, x, h=1e-6):
    cols = []
    for d in range(x.size):
        step = np.zeros_like(x)
        step[d] = h
        cols.append((np.asarray(resid_fn(x + step)) -
                     np.asarray(resid_fn(x - step))) / (2 * h))
    return np.column_stack(cols)


def _known_phase(x, seen):
    return any(float(np.max(np.abs(_wrap(x - s)))) < 1e-6 for s in seen)


# seed offsets for the fold-completion sweep; spans twin separations from
# roughly 0.01 to 0.8 rad
_FOLD_STEPS = (0.01, 0.02, 0.05, 0.1, 0.2, 0.4)


def _complete_folds(resid_fn, entries, noise_scale):
    """Chase twin solutions hiding in an already-found solution's basin.

    Zeros of the phase system can come in close pairs (a fold about to
    merge); the grid then seeds only one member and refinement lands on it,
    silently dropping its twin.  At such a zero the Jacobian is nearly
    singular and the twin lies along its smallest singular direction, so a
    deterministic fan of refinement starts along that line recovers it.
    """
    best = min(r for _, r in entries)
    if best > RESIDUAL_CEILING:
        return entries
    cutoff = _keep_threshold(best, noise_scale)
    ordered = sorted(enumerate(entries), key=lambda ke: (ke[1][1], ke[0]))
    uniq = []
    for _, (x, r) in ordered:
        if r <= cutoff and not _known_phase(x, [u for u, _ in uniq]):
            uniq.append((x, r))
    uniq = uniq[:16]
    seen = [x for x, _ in uniq]
    queue = list(seen)
    out = list(entries)
    for _ in range(2):
        if not queue:
            break
        new = []
        for x0 in queue:
            jac = _numeric_jacobian(resid_fn, x0)
            v = np.linalg.svd(jac)[2][-1]
            for t in _FOLD_STEPS:
                for sign in (1.0, -1.0):
                    x, r = _lm_polish(resid_fn, x0 + sign * t * v)
                    if r <= cutoff and not _known_phase(x, seen):
                        seen.append(x)
                        new.append(x)
                        out.append((x, r))
        queue = new
    return out


def _refine_minima(rms_grid_fn, resid_fn, ndim, grid_n, noise_scale=0.0,
                   max_candidates=200):
    """All local minima of a periodic least-squares problem, refined.

    The rms residual is evaluated on a regular ndim-torus grid, every point
    at or below all its axis neighbours (wraparound included) seeds a local
    least-squares refinement, and the refined phase vectors are returned with
    their residuals.  A completion sweep then probes each solution for fold
    twins the grid cannot separate.  Fully deterministic for fixed input.
    """
    axes = [
        np.linspace(-math.pi, math.pi, grid_n, endpoint=False)
        for _ in range(ndim)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    r = rms_grid_fn(mesh)
    mask = np.ones(r.shape, dtype=bool)
    for ax in range(ndim):
        for shift in (1, -1):
            mask &= r <= np.roll(r, shift, axis=ax)
    cand = np.argwhere(mask)
    # deterministic order: best residual first, then lexicographic position
    keys = [r[tuple(cand.T)]] + [cand[:, i] for i in range(ndim)]
    order = np.lexsort(tuple(reversed(keys)))
    cand = cand[order][:max_candidates]
    out = []
    for idx in cand:
        x0 = np.array([axes[d][i] for d, i in enumerate(idx)], dtype=float)
        out.append(_lm_polish(resid_fn, x0))
    if out:
        out = _complete_folds(resid_fn, out, noise_scale)
    return out


def _rank_solutions(entries, noise_scale):
    """Filter, dedupe and order refined solutions.

    entries: list of (state, residual, display_phases).  Raises Inconsistent
    when nothing survives the residual ceiling.  Returns the survivors in
    canonical order (lexicographically smallest display phases modulo 2 pi),
    physically identical duplicates removed.
    """
    if not entries:
        raise Inconsistent("phase search produced no candidates")
    best = min(e[1] for e in entries)
    if best > RESIDUAL_CEILING:
        raise Inconsistent(
            f"no phase assignment fits the records (best rms mismatch {best:.4g})",
            best_residual=best,
        )
    keep = [e for e in entries if e[1] <= _keep_threshold(best, noise_scale)]
    keep.sort(key=lambda e: tuple(round(p % TWO_PI, 9) for p in e[2]))
    out = []
    for st, r, ph in keep:
        dup = any(
            abs(np.vdot(st.amplitudes, o.amplitudes)) >= 1.0 - OVERLAP_DEDUPE
            for o, _, _ in out
        )
        if not dup:
            out.append((st, r, ph))
    return out


# ---------------------------------------------------------------------------
# qutrit phases
# ---------------------------------------------------------------------------

def qutrit_phases(est):
    """Solve the qutrit phase equations from a two-basis magnitude estimate.

    Returns a ReconstructionResult in the C2-real gauge with every admissible
    solution (canonical first, mirrors and extra discrete branches as
    alternates).  Raises Inconsistent when no phases fit, PhaseUnobservable
    when the interference amplitude C2 is below the zero threshold while both
    outer amplitudes are present (then only |phi1 - phi3| is recoverable and
    the partial result rides on the exception).
    """
    _require_both(est)
    if est.kind != "qutrit":
        raise ValueError(f"estimate is for a {est.kind}, not a qutrit")
    m = np.asarray(est.magnitudes, dtype=float)
    n = np.asarray(est.magnitudes45, dtype=float)
    thr = _zero_threshold(est)
    warnings = list(est.warnings)
    zero = m < thr

    if zero[1] and not zero[0] and not zero[2]:
        # no interference term: only cos(phi1 - phi3) is fixed, sign and all
        val = (0.5 * (m[0] ** 2 + m[2] ** 2) - n[1] ** 2) / (m[0] * m[2])
        psi = math.acos(min(1.0, max(-1.0, val)))
        pairs = [(psi / 2.0, -psi / 2.0)]
        if math.sin(psi) > 1e-12:
            pairs.append((-psi / 2.0, psi / 2.0))
        entries = []
        for phi1, phi3 in pairs:
            st = QutritState(
                m[0] * np.exp(1j * phi1), m[1], m[2] * np.exp(1j * phi3)
            )
            r = float(_rms(qutrit_phase_equations(m, n, phi1, phi3)))
            entries.append((st, r, (phi1, phi3)))
        entries.sort(key=lambda e: tuple(round(p % TWO_PI, 9) for p in e[2]))
        states = [e[0] for e in entries]
        warnings.append(
            "interference amplitude below threshold: only the relative phase "
            "phi1 - phi3 is observable, up to sign"
        )
        result = ReconstructionResult(
            kind="qutrit",
            state=states[0],
            residual=entries[0][1],
            alternates=states[1:],
            gauge="phi3 = -phi1 (C2 below threshold)",
            warnings=warnings,
        )
        raise PhaseUnobservable(
            "C2 below threshold: phases only observable through phi1 - phi3",
            result=result,
        )

    # a phase is solvable only when its amplitude and an interference partner
    # both survive the threshold
    a1 = (not zero[0]) and (not zero[1] or not zero[2])
    a3 = (not zero[2]) and (not zero[1] or not zero[0])
    free = [slot for slot, act in ((0, a1), (1, a3)) if act]
    if zero.any():
        pinned = [i + 1 for i in range(3) if zero[i]]
        warnings.append(
            f"amplitudes {pinned} below the zero threshold; "
            "their phases are pinned to 0"
        )

    def phases_of(x):
        phi = [0.0, 0.0]
        for slot, val in zip(free, x):
            phi[slot] = val
        return phi

    if not free:
        phi1, phi3 = 0.0, 0.0
        st = QutritState(m[0], m[1], m[2])
        r = float(_rms(qutrit_phase_equations(m, n, phi1, phi3)))
        if r > RESIDUAL_CEILING:
            raise Inconsistent(
                f"records do not fit any qutrit (rms mismatch {r:.4g})",
                best_residual=r,
            )
        return ReconstructionResult(
            kind="qutrit", state=st, residual=r, alternates=[],
            gauge="phi2 = 0 (C2 real non-negative)", warnings=warnings,
        )

    def rms_grid(mesh):
        phi1, phi3 = phases_of(mesh)
        return _rms(qutrit_phase_equations(m, n, phi1, phi3))

    def resid(x):
        phi1, phi3 = phases_of(x)
        return np.array(qutrit_phase_equations(m, n, phi1, phi3))

    refined = _refine_minima(
        rms_grid, resid, ndim=len(free), grid_n=QUTRIT_GRID,
        noise_scale=est.noise_scale,
    )
    entries = []
    for x, r in refined:
        phi1, phi3 = phases_of(x)
        st = QutritState(
            m[0] * np.exp(1j * phi1), m[1], m[2] * np.exp(1j * phi3)
        )
        entries.append((st, r, (phi1, phi3)))
    ranked = _rank_solutions(entries, est.noise_scale)
    states = [e[0] for e in ranked]
    return ReconstructionResult(
        kind="qutrit",
        state=states[0],
        residual=ranked[0][1],
        alternates=states[1:],
        gauge="phi2 = 0 (C2 real non-negative)",
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# ququart phases
# ---------------------------------------------------------------------------

def ququart_phases(est):
    """Solve the ququart phase equations from a two-basis magnitude estimate.

    Same contract as qutrit_phases, in the zero-sum phase gauge.  Any
    amplitude below the zero threshold makes some phase combination
    unobservable; the partial result (unobservable phases pinned to 0) then
    rides on a PhaseUnobservable exception.
    """
    _require_both(est)
    if est.kind != "ququart":
        raise ValueError(f"estimate is for a {est.kind}, not a ququart")
    m = np.asarray(est.magnitudes, dtype=float)
    n = np.asarray(est.magnitudes45, dtype=float)
    thr = _zero_threshold(est)
    warnings = list(est.warnings)
    zero = m < thr
    active = [i for i in range(4) if not zero[i]]

    if zero.any():
        pinned = [i + 1 for i in range(4) if zero[i]]
        warnings.append(
            f"amplitudes {pinned} below the zero threshold; "
            "their phases are pinned to 0"
        )

    def build_state(phases):
        return QuquartState(*(m * np.exp(1j * np.asarray(phases))))

    if len(active) <= 1:
        phases = (0.0, 0.0, 0.0, 0.0)
        st = build_state(phases)
        r = float(_rms(ququart_phase_equations(m, n, phases)))
        result = ReconstructionResult(
            kind="ququart", state=st, residual=r, alternates=[],
            gauge="all phases pinned to 0 (at most one amplitude present)",
            warnings=warnings,
        )
        raise PhaseUnobservable(
            "at most one amplitude above threshold: no phase is observable",
            result=result,
        )

    ndim = len(active) - 1
    grid_n = {1: 256, 2: 64, 3: QUQUART_GRID}[ndim]

    def phases_of(x):
        # x holds the first len(active)-1 active phases; the last active one
        # balances the sum to zero, pinned phases stay 0
        phases = [0.0] * 4
        total = 0.0
        for idx, val in zip(active[:-1], x):
            phases[idx] = val
            total = total + val
        phases[active[-1]] = -total
        return phases

    def rms_grid(mesh):
        return _rms(ququart_phase_equations(m, n, phases_of(mesh)))

    def resid(x):
        return np.array(ququart_phase_equations(m, n, phases_of(x)))

    refined = _refine_minima(
        rms_grid, resid, ndim=ndim, grid_n=grid_n,
        noise_scale=est.noise_scale,
    )
    entries = []
    for x, r in refined:
        phases = [float(_wrap(p)) for p in phases_of(x)]
        entries.append((build_state(phases), r, tuple(phases)))
    ranked = _rank_solutions(entries, est.noise_scale)
    states = [e[0] for e in ranked]
    if len(active) == 4:
        gauge = "phi1 + phi2 + phi3 + phi4 = 0"
    else:
        names = "+".join(f"phi{i + 1}" for i in active)
        gauge = f"{names} = 0, phases of below-threshold amplitudes pinned to 0"
    result = ReconstructionResult(
        kind="ququart",
        state=states[0],
        residual=ranked[0][1],
        alternates=states[1:],
        gauge=gauge,
        warnings=warnings,
    )
    if zero.any():
        raise PhaseUnobservable(
            "amplitudes below threshold leave some phase combinations "
            "unobservable",
            result=result,
        )
    return result


# ---------------------------------------------------------------------------
# real-amplitude shortcuts
# ---------------------------------------------------------------------------

def _hv_pair(singles):
    # accept a CoincidenceRecord.single_particle() mapping or a bare pair
    if hasattr(singles, "keys"):
        return float(singles["H"]), float(singles["V"])
    return float(singles[0]), float(singles[1])


def qutrit_real_shortcut(est, singles=None, singles45=None):
    """K and C of a real-amplitude qutrit from single-photon probabilities.

    For real amplitudes the polarization vector lies in a plane, and the two
    single-photon probability imbalances dw = w_H - w_V (natural frame) and
    dw45 (rotated frame) determine everything:

        1/K = (1 + dw^2 + dw45^2) / 2        C = sqrt(1 - dw^2 - dw45^2)

    singles / singles45 are (w_H, w_V) pairs; when omitted they are derived
    from the magnitude estimate via w_H = |C1|^2 + |C2|^2/2 and its mirror.
    Returns (K, C).
    """
    _require_both(est)
    if singles is None:
        m = est.magnitudes
        singles = (m[0] ** 2 + m[1] ** 2 / 2.0, m[2] ** 2 + m[1] ** 2 / 2.0)
    if singles45 is None:
        n = est.magnitudes45
        singles45 = (n[0] ** 2 + n[1] ** 2 / 2.0, n[2] ** 2 + n[1] ** 2 / 2.0)
    singles = _hv_pair(singles)
    singles45 = _hv_pair(singles45)
    dw = float(singles[0]) - float(singles[1])
    dw45 = float(singles45[0]) - float(singles45[1])
    kinv = 0.5 * (1.0 + dw * dw + dw45 * dw45)
    c_sq = 1.0 - dw * dw - dw45 * dw45
    return 1.0 / kinv, math.sqrt(max(0.0, c_sq))


def ququart_real_shortcut(est):
    """K and C_I of a real-amplitude ququart straight from magnitudes.

    The determinant magnitude obeys

        |C1 C4 - C2 C3|^2 = 2 (|C1|^2 |C4|^2 + |C2|^2 |C3|^2)
                            - (|C1(45)|^2 + |C4(45)|^2 - 1/2)^2

    for real amplitudes of any signs.  The value must land in [0, 1/4];
    noise can push it out, in which case Inconsistent is raised carrying the
    quantifiers of the clipped value.  Returns (K, C_I).
    """
    _require_both(est)
    if est.kind != "ququart":
        raise ValueError(f"estimate is for a {est.kind}, not a ququart")
    m = np.asarray(est.magnitudes, dtype=float)
    n = np.asarray(est.magnitudes45, dtype=float)
    cross = n[0] ** 2 + n[3] ** 2 - 0.5
    d = 2.0 * (m[0] ** 2 * m[3] ** 2 + m[1] ** 2 * m[2] ** 2) - cross * cross
    d_clip = min(0.25, max(0.0, d))
    k = 2.0 / (1.0 - 2.0 * d_clip)
    ci = math.sqrt(1.0 + 2.0 * d_clip)
    if d < -1e-9 or d > 0.25 + 1e-9:
        raise Inconsistent(
            f"determinant magnitude {d:.6g} outside [0, 1/4]: records do not "
            "fit a real-amplitude ququart",
            clipped=(k, ci),
        )
    return k, ci
