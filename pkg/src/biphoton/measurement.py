"""Simulated beam-splitter coincidence measurements.

The measurement scheme sends the collinear pair onto a 50/50 beam splitter
and counts coincidences between the two output arms behind polarizers.  The
beam-splitter (angular) factor is separable and identical for all
polarization settings, so it cancels from every conditional probability; it
only costs a factor eta/2 of the pairs, with eta the detector/collection
efficiency.

For a qutrit the four ordered polarizer settings (sigma | sigma') draw from

    N_{H|H} = (eta/2) N |C1|^2        N_{V|V} = (eta/2) N |C3|^2
    N_{H|V} = N_{V|H} = (eta/4) N |C2|^2

so the conditional coincidence probabilities are (|C1|^2, |C2|^2/2,
|C2|^2/2, |C3|^2) and single-photon probabilities are their row sums.  For
a frequency-nondegenerate ququart the analogue runs over eight ordered
settings that pair one high-frequency with one low-frequency detector, two
settings per amplitude, each carrying |Ck|^2/2.

Records come in two modes: "ideal" records hold real-valued expected counts,
"sampled" records hold integer counts drawn reproducibly from the seeded
two-stage noise model (binomial pair loss, then a multinomial split over the
ordered settings).
"""

import math
from dataclasses import dataclass

import numpy as np

from .tensor import ConsistencyError, schmidt_number
from . import qutrit as _qutrit
from . import ququart as _ququart

SQRT2 = math.sqrt(2.0)

BASES = ("natural", "rotated45")
NOISE_MODES = ("ideal", "sampled")

# ordered polarizer settings, "first arm | second arm"
QUTRIT_SETTINGS = ("H|H", "H|V", "V|H", "V|V")

# ordered ququart settings, grouped in pairs that probe |C1|^2 .. |C4|^2
QUQUART_SETTINGS = (
    "Hh|Hl", "Hl|Hh",
    "Hh|Vl", "Vl|Hh",
    "Hl|Vh", "Vh|Hl",
    "Vh|Vl", "Vl|Vh",
)

SCHEMA = "coincidence/1"


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs of one simulated coincidence run.

    total_pairs is the number of generated pairs N, detector_efficiency the
    combined collection/detection efficiency eta in (0, 1], basis selects the
    polarizer frame, noise selects ideal expected counts or seeded sampling.
    """

    total_pairs: int
    detector_efficiency: float = 1.0
    basis: str = "natural"
    noise: str = "ideal"
    seed: int = 0

    def __post_init__(self):
        if self.total_pairs < 1:
            raise ValueError("total_pairs must be at least 1")
        if not 0.0 < self.detector_efficiency <= 1.0:
            raise ValueError("detector_efficiency must lie in (0, 1]")
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}")
        if self.noise not in NOISE_MODES:
            raise ValueError(f"noise must be one of {NOISE_MODES}")


@dataclass(frozen=True)
class CoincidenceRecord:
    """One immutable set of coincidence counts.

    counts maps ordered settings "sigma|sigma'" to expected (real, mode
    "ideal") or drawn (integer, mode "sampled") coincidence numbers.  The
    mode tag travels with the record so consumers cannot confuse the two.
    """

    basis: str
    mode: str
    eta: float
    total_pairs: int
    counts: dict
    seed: int = None

    @property
    def kind(self):
        # ququart settings carry the frequency letter, e.g. "Hh|Vl"
        if any(len(k.split("|")[0]) > 1 for k in self.counts):
            return "ququart"
        return "qutrit"

    def total_coincidences(self):
        return sum(self.counts.values())

    def conditional_probabilities(self):
        """Counts normalized by the total; sums to 1 and is eta-free."""
        total = self.total_coincidences()
        if total <= 0:
            raise ValueError("record holds no coincidences")
        return {k: v / total for k, v in self.counts.items()}

    def single_particle(self):
        """Single-photon detection probabilities as row sums over settings."""
        w = self.conditional_probabilities()
        out = {}
        for key, val in w.items():
            first = key.split("|")[0]
            out[first] = out.get(first, 0.0) + val
        return out

    def to_dict(self):
        d = {
            "schema": SCHEMA,
            "basis": self.basis,
            "mode": self.mode,
            "eta": self.eta,
            "total_pairs": self.total_pairs,
            "counts": dict(self.counts),
        }
        if self.mode == "sampled":
            d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or d.get("schema") != SCHEMA:
            raise ValueError(f"not a {SCHEMA} record")
        for key in ("basis", "mode", "eta", "total_pairs", "counts"):
            if key not in d:
                raise ValueError(f"record is missing the {key!r} field")
        return cls(
            basis=d["basis"],
            mode=d["mode"],
            eta=float(d["eta"]),
            total_pairs=int(d["total_pairs"]),
            counts=dict(d["counts"]),
            seed=d.get("seed"),
        )


def beam_splitter_wavefunction(q):
    """Attach the 50/50 beam-splitter output factor to a qutrit.

    Each photon picks up the angular mode (1, -1)/sqrt(2) over the two output
    arms, so the composite per-photon space is (polarization x arm) and the
    full state lives in 16 dimensions.  The angular factor is a product and
    adds no entanglement; the Schmidt parameter of the composite is verified
    to match the bare qutrit at call time.
    """
    m_pol = _qutrit.wavefunction(q).reshape(2, 2)
    arm = np.array([1.0, -1.0]) / SQRT2
    composite = np.kron(m_pol, np.outer(arm, arm)).reshape(16)
    k_comp = schmidt_number(composite, 4)
    k_q = 2.0 / (2.0 - _qutrit.concurrence(q) ** 2)
    if abs(k_comp - k_q) > 1e-10:
        raise ConsistencyError(
            f"angular factor changed K: composite {k_comp!r} vs qutrit {k_q!r}"
        )
    return composite


def _qutrit_probabilities(q, basis):
    if basis == "rotated45":
        q = _qutrit.rotate_basis(q, math.pi / 4.0)
    p = np.abs(q.amplitudes) ** 2
    # ordered-setting probabilities, aligned with QUTRIT_SETTINGS
    return np.array([p[0], p[1] / 2.0, p[1] / 2.0, p[2]])


def _ququart_probabilities(s, basis):
    if basis == "rotated45":
        s = _ququart.rotate_basis_45(s)
    p = np.abs(s.amplitudes) ** 2
    return np.repeat(p / 2.0, 2)


def expected_coincidences(q, cfg):
    """Ideal (expected-value) coincidence record for a qutrit.

    Every coincidence class claims its share of the (eta/2) N pairs that
    survive the beam splitter and the detectors.
    """
    probs = _qutrit_probabilities(q, cfg.basis)
    scale = cfg.detector_efficiency / 2.0 * cfg.total_pairs
    counts = {k: float(scale * p) for k, p in zip(QUTRIT_SETTINGS, probs)}
    return CoincidenceRecord(
        basis=cfg.basis,
        mode="ideal",
        eta=cfg.detector_efficiency,
        total_pairs=cfg.total_pairs,
        counts=counts,
    )


def sample_coincidences(q, cfg):
    """Seeded noisy coincidence record for a qutrit.

    Two-stage model: the number of detected coincidences is binomial with
    success probability eta/2 per generated pair, and those are split over
    the ordered settings by a single multinomial draw.  Identical
    (state, config) always reproduces identical counts.
    """
    if cfg.noise != "sampled":
        raise ValueError("sample_coincidences needs a config with noise='sampled'")
    probs = _qutrit_probabilities(q, cfg.basis)
    rng = np.random.default_rng(cfg.seed)
    n_det = rng.binomial(cfg.total_pairs, cfg.detector_efficiency / 2.0)
    draws = rng.multinomial(n_det, probs / probs.sum())
    counts = {k: int(v) for k, v in zip(QUTRIT_SETTINGS, draws)}
    return CoincidenceRecord(
        basis=cfg.basis,
        mode="sampled",
        eta=cfg.detector_efficiency,
        total_pairs=cfg.total_pairs,
        counts=counts,
        seed=cfg.seed,
    )


def expected_coincidences_ququart(s, cfg):
    """Ideal coincidence record for a ququart over the eight ordered settings.

    Each amplitude feeds the two settings that pair its high- and
    low-frequency detectors, at (eta/4) N |Ck|^2 apiece, so the two
    conditional probabilities of a pair average to |Ck|^2 / 2.
    """
    probs = _ququart_probabilities(s, cfg.basis)
    scale = cfg.detector_efficiency / 2.0 * cfg.total_pairs
    counts = {k: float(scale * p) for k, p in zip(QUQUART_SETTINGS, probs)}
    return CoincidenceRecord(
        basis=cfg.basis,
        mode="ideal",
        eta=cfg.detector_efficiency,
        total_pairs=cfg.total_pairs,
        counts=counts,
    )


def sample_coincidences_ququart(s, cfg):
    """Seeded noisy coincidence record for a ququart (same model as qutrits)."""
    if cfg.noise != "sampled":
        raise ValueError("sample_coincidences_ququart needs a config with noise='sampled'")
    probs = _ququart_probabilities(s, cfg.basis)
    rng = np.random.default_rng(cfg.seed)
    n_det = rng.binomial(cfg.total_pairs, cfg.detector_efficiency / 2.0)
    draws = rng.multinomial(n_det, probs / probs.sum())
    counts = {k: int(v) for k, v in zip(QUQUART_SETTINGS, draws)}
    return CoincidenceRecord(
        basis=cfg.basis,
        mode="sampled",
        eta=cfg.detector_efficiency,
        total_pairs=cfg.total_pairs,
        counts=counts,
        seed=cfg.seed,
    )
