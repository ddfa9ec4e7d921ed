"""The four scalar-annotation methods and their online update rules.

Four ways to turn elicited judgments into per-item scalar scores:

* ``DA`` (direct assessment): scores are accumulated and averaged.
* ``RA_GAUSSIAN``: each item is a Gaussian N(mu, sigma2); pairwise
  win/tie/loss outcomes move mu and shrink sigma2 by surprisal-weighted
  factors (the classic online skill-rating update).
* ``RA_BETA``: each item is a Beta(alpha, beta) with [0, 1] support; the
  same surprisal idea drives additive, never-decreasing updates to the
  shape parameters, with win/tie/loss probabilities from the
  Rao-Kupper extension of Bradley-Terry.
* ``EASL``: items stay Beta-parameterized but annotators give scalar
  scores directly; each score s adds s to alpha and 1-s to beta.

Match quality - a kernel on two items' current locations and
uncertainties - scores how informative comparing them would be and is
what the batch scheduler samples by.

All update functions are pure: they take states and return new states.
``ModelState`` is the stateful wrapper that owns one collection of items
and applies observation records sequentially (the service layer and the
replay machinery both funnel through it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

from .statcore import (
    BetaParams,
    GaussianParams,
    beta_mode,
    beta_variance,
    pdf_over_cdf,
    std_normal_cdf,
    std_normal_pdf,
)


class Method(str, Enum):
    DA = "da"
    RA_GAUSSIAN = "ra-gaussian"
    RA_BETA = "ra-beta"
    EASL = "easl"


@dataclass(frozen=True)
class ModelConfig:
    """Method selector plus the shared hyperparameters.

    gamma is the skill-chain scale (how score differences map to win
    probability), epsilon the tie rate, n the HIT size. Beta-backed
    methods start every item at Beta(alpha_init, beta_init); the Gaussian
    method starts at N(mu_init, sigma2_init). thurstone_sigma is the fixed
    deviate used only by :func:`thurstone_win_prob`.
    """

    method: Method
    gamma: float = 0.1
    epsilon: float = 0.1
    n: int = 5
    alpha_init: float = 1.0
    beta_init: float = 1.0
    mu_init: float = 0.5
    sigma2_init: float = 1.0 / 12.0
    thurstone_sigma: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", Method(self.method))
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.method == Method.RA_GAUSSIAN and self.epsilon == 0.0:
            # The Gaussian tie factors are undefined for a zero-width tie
            # window; reject up front rather than mid-batch on the first tie.
            raise ValueError("the Gaussian ranking method needs epsilon > 0")
        if self.n < 2:
            raise ValueError(f"HIT size n must be >= 2, got {self.n}")
        if self.alpha_init < 1.0 or self.beta_init < 1.0:
            raise ValueError("alpha_init and beta_init must be >= 1")
        if self.sigma2_init <= 0.0:
            raise ValueError("sigma2_init must be > 0")

    def initial_params(self) -> GaussianParams | BetaParams:
        if self.method == Method.RA_GAUSSIAN:
            return GaussianParams(self.mu_init, self.sigma2_init)
        return BetaParams(self.alpha_init, self.beta_init)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "n": self.n,
            "alpha_init": self.alpha_init,
            "beta_init": self.beta_init,
            "mu_init": self.mu_init,
            "sigma2_init": self.sigma2_init,
            "thurstone_sigma": self.thurstone_sigma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**{k: d[k] for k in d if k in cls.__dataclass_fields__})


@dataclass(frozen=True)
class InstanceState:
    """One item's latent-score state: parameters plus observation count."""

    item_id: str
    params: GaussianParams | BetaParams
    observation_count: int = 0


@dataclass(frozen=True)
class PairwiseOutcome:
    """A single pairwise judgment: ``winner_id`` beat (or tied) ``loser_id``.

    Ties carry no direction, so their two ids are canonicalized to
    lexicographic order on construction; processing is then independent of
    how the tie was reported.
    """

    winner_id: str
    loser_id: str
    kind: str = "win"  # "win" | "tie"

    def __post_init__(self) -> None:
        if self.kind not in ("win", "tie"):
            raise ValueError(f"kind must be 'win' or 'tie', got {self.kind!r}")
        if self.winner_id == self.loser_id:
            raise ValueError(f"self-comparison for item {self.winner_id!r}")
        if self.kind == "tie" and self.loser_id < self.winner_id:
            a, b = self.loser_id, self.winner_id
            object.__setattr__(self, "winner_id", a)
            object.__setattr__(self, "loser_id", b)

    @classmethod
    def win(cls, winner_id: str, loser_id: str) -> "PairwiseOutcome":
        return cls(winner_id, loser_id, "win")

    @classmethod
    def tie(cls, a: str, b: str) -> "PairwiseOutcome":
        return cls(a, b, "tie")


@dataclass(frozen=True)
class ScalarJudgment:
    """A direct scalar score for one item, normalized to [0, 1]."""

    item_id: str
    score: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.score) and 0.0 <= self.score <= 1.0):
            raise ValueError(f"score must be in [0, 1], got {self.score}")


# ---------------------------------------------------------------------------
# Pairwise probabilities and surprisal factors
# ---------------------------------------------------------------------------


def thurstone_win_prob(mu_i: float, mu_j: float, sigma: float) -> float:
    """P(i preferred over j) when both latents are N(mu, sigma^2) with a
    shared fixed deviate: Phi((mu_i - mu_j) / (sqrt(2) * sigma)).

    Summing log win probabilities over observed comparisons gives the
    batch maximum-likelihood objective for the latent means; this package
    deliberately fits nothing in batch and relies on the online updates
    below instead.
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return std_normal_cdf((mu_i - mu_j) / (math.sqrt(2.0) * sigma))


def ts_v_win(t: float, eps: float) -> float:
    """Mean-update surprisal factor for a win: phi(t-eps)/Phi(t-eps).

    Strictly positive and decreasing in t; for deeply negative t (a huge
    upset) it approaches eps - t instead of overflowing.
    """
    if not (math.isfinite(t) and math.isfinite(eps)):
        raise ValueError("t and eps must be finite")
    return pdf_over_cdf(t - eps)


def _v_tie_abs(a: float, eps: float) -> float:
    # a >= 0; raw evaluation of the tie factor at +a.
    num = std_normal_pdf(eps + a) - std_normal_pdf(eps - a)
    den = std_normal_cdf(eps - a) - std_normal_cdf(-eps - a)
    if den <= 0.0:
        # Both tails underflowed: asymptote of the ratio.
        return -(a - eps)
    return num / den


def ts_v_tie(t: float, eps: float) -> float:
    """Mean-update surprisal factor for a tie; odd in t, zero at t = 0.

    Negative for t > 0: a tie pulls the higher-rated item down. Evaluated
    at |t| and sign-flipped so odd symmetry is exact.
    """
    if not (math.isfinite(t) and math.isfinite(eps)):
        raise ValueError("t and eps must be finite")
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0 for tie factors, got {eps}")
    val = _v_tie_abs(abs(t), eps)
    return val if t >= 0.0 else -val


def ts_w_win(t: float, eps: float) -> float:
    """Variance-update factor for a win: v * (v + t - eps); in (0, 1)."""
    v = ts_v_win(t, eps)
    return v * (v + t - eps)


def ts_w_tie(t: float, eps: float) -> float:
    """Variance-update factor for a tie; even in t, in (0, 1).

    v_tie^2 + ((eps-t) phi(eps-t) + (eps+t) phi(eps+t)) / (Phi(eps-t) - Phi(-eps-t)),
    evaluated at |t| so even symmetry is exact.
    """
    if not (math.isfinite(t) and math.isfinite(eps)):
        raise ValueError("t and eps must be finite")
    if eps <= 0.0:
        raise ValueError(f"eps must be > 0 for tie factors, got {eps}")
    a = abs(t)
    den = std_normal_cdf(eps - a) - std_normal_cdf(-eps - a)
    if den <= 0.0:
        return 1.0  # limit of the factor as |t| grows
    v = _v_tie_abs(a, eps)
    num = (eps - a) * std_normal_pdf(eps - a) + (eps + a) * std_normal_pdf(eps + a)
    return v * v + num / den


def rao_kupper_probs(m_i: float, m_j: float, eps: float) -> tuple[float, float, float]:
    """(p_win, p_tie, p_loss) for items at locations m_i, m_j in [0, 1].

    Bradley-Terry with explicit tie mass: theta = exp(eps),
    pi = exp(location). The three probabilities sum to 1.
    """
    if not (0.0 <= m_i <= 1.0 and 0.0 <= m_j <= 1.0):
        raise ValueError(f"locations must be in [0, 1], got ({m_i}, {m_j})")
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    theta = math.exp(eps)
    pi_i = math.exp(m_i)
    pi_j = math.exp(m_j)
    p_win = pi_i / (pi_i + theta * pi_j)
    p_loss = pi_j / (theta * pi_i + pi_j)
    p_tie = (theta * theta - 1.0) * pi_i * pi_j / (
        (pi_i + theta * pi_j) * (theta * pi_i + pi_j)
    )
    return p_win, p_tie, p_loss


# ---------------------------------------------------------------------------
# State read-outs
# ---------------------------------------------------------------------------


def state_location(state: InstanceState) -> float:
    """The comparable location: mu for Gaussian items, mode for beta items."""
    if isinstance(state.params, GaussianParams):
        return state.params.mu
    return beta_mode(state.params)


def state_variance(state: InstanceState) -> float:
    """Current uncertainty: sigma2 for Gaussian items, beta variance otherwise."""
    if isinstance(state.params, GaussianParams):
        return state.params.sigma2
    return beta_variance(state.params)


def current_score(state: InstanceState) -> float:
    """Deterministic scalar read-out of a state (no mutation)."""
    return state_location(state)


def match_quality(state_i: InstanceState, state_j: InstanceState, gamma: float) -> float:
    """How informative comparing two items would be, in (0, 1].

    sqrt(2 gamma^2 / c^2) * exp(-(loc_i - loc_j)^2 / (2 c^2)) with
    c^2 = 2 gamma^2 + var_i + var_j. Maximal when the locations coincide;
    decays as they separate.
    """
    if isinstance(state_i.params, GaussianParams) != isinstance(
        state_j.params, GaussianParams
    ):
        raise ValueError("match_quality requires states of the same parameterization")
    two_g2 = 2.0 * gamma * gamma
    c2 = two_g2 + state_variance(state_i) + state_variance(state_j)
    d = state_location(state_i) - state_location(state_j)
    return math.sqrt(two_g2 / c2) * math.exp(-(d * d) / (2.0 * c2))


# ---------------------------------------------------------------------------
# Update rules
# ---------------------------------------------------------------------------


def _pick_roles(
    state_i: InstanceState, state_j: InstanceState, outcome: PairwiseOutcome
) -> tuple[InstanceState, InstanceState]:
    ids = {state_i.item_id, state_j.item_id}
    if ids != {outcome.winner_id, outcome.loser_id}:
        raise ValueError(
            f"outcome {outcome.winner_id!r}/{outcome.loser_id!r} does not "
            f"match states {sorted(ids)}"
        )
    if state_i.item_id == outcome.winner_id:
        return state_i, state_j
    return state_j, state_i


def _reorder(
    state_i: InstanceState,
    state_j: InstanceState,
    first: InstanceState,
    second: InstanceState,
) -> tuple[InstanceState, InstanceState]:
    # Return (new_i, new_j) matching the caller's argument order.
    if state_i.item_id == first.item_id:
        return first, second
    return second, first


def ra_gaussian_update(
    state_i: InstanceState,
    state_j: InstanceState,
    outcome: PairwiseOutcome,
    cfg: ModelConfig,
) -> tuple[InstanceState, InstanceState]:
    """Apply one pairwise outcome to two Gaussian-parameterized states.

    Means move by (sigma2/c) * v(t/c, eps/c) - winner up, loser down, or
    toward each other on a tie - and both variances contract by the factor
    1 - (sigma2/c^2) * w(t/c, eps/c). The result only depends on the
    outcome, never on the argument order.
    """
    if not (
        isinstance(state_i.params, GaussianParams)
        and isinstance(state_j.params, GaussianParams)
    ):
        raise ValueError("ra_gaussian_update requires Gaussian-parameterized states")

    first, second = _pick_roles(state_i, state_j, outcome)
    p1: GaussianParams = first.params
    p2: GaussianParams = second.params
    c2 = 2.0 * cfg.gamma * cfg.gamma + p1.sigma2 + p2.sigma2
    c = math.sqrt(c2)
    t = (p1.mu - p2.mu) / c
    e = cfg.epsilon / c

    if outcome.kind == "win":
        v = ts_v_win(t, e)
        w = ts_w_win(t, e)
    else:
        v = ts_v_tie(t, e)
        w = ts_w_tie(t, e)

    new_first = replace(
        first,
        params=GaussianParams(
            p1.mu + (p1.sigma2 / c) * v,
            p1.sigma2 * (1.0 - (p1.sigma2 / c2) * w),
        ),
        observation_count=first.observation_count + 1,
    )
    new_second = replace(
        second,
        params=GaussianParams(
            p2.mu - (p2.sigma2 / c) * v,
            p2.sigma2 * (1.0 - (p2.sigma2 / c2) * w),
        ),
        observation_count=second.observation_count + 1,
    )
    return _reorder(state_i, state_j, new_first, new_second)


def ra_beta_update(
    state_i: InstanceState,
    state_j: InstanceState,
    outcome: PairwiseOutcome,
    cfg: ModelConfig,
) -> tuple[InstanceState, InstanceState]:
    """Apply one pairwise outcome to two beta-parameterized states.

    All probabilities come from the pre-update modes. On a win the
    winner's alpha and the loser's beta grow by (sigma2/c) * (1 - p);
    a tie pulls the items together when their modes differ by more than
    eps (lower item's alpha and higher item's beta grow) and sharpens both
    when they are already within eps (all four parameters grow). Shape
    parameters never decrease.
    """
    if not (
        isinstance(state_i.params, BetaParams)
        and isinstance(state_j.params, BetaParams)
    ):
        raise ValueError("ra_beta_update requires beta-parameterized states")

    first, second = _pick_roles(state_i, state_j, outcome)
    b1: BetaParams = first.params
    b2: BetaParams = second.params
    m1, m2 = beta_mode(b1), beta_mode(b2)
    s1, s2 = beta_variance(b1), beta_variance(b2)
    c = math.sqrt(2.0 * cfg.gamma * cfg.gamma + s1 + s2)

    if outcome.kind == "win":
        p_win, _, _ = rao_kupper_probs(m1, m2, cfg.epsilon)
        # p(loser loses to winner) equals p(winner beats loser).
        new_b1 = BetaParams(b1.alpha + (s1 / c) * (1.0 - p_win), b1.beta)
        new_b2 = BetaParams(b2.alpha, b2.beta + (s2 / c) * (1.0 - p_win))
    else:
        _, p_tie, _ = rao_kupper_probs(m1, m2, cfg.epsilon)
        surprise = 1.0 - p_tie
        if abs(m1 - m2) <= cfg.epsilon:
            new_b1 = BetaParams(
                b1.alpha + (s1 / c) * surprise, b1.beta + (s1 / c) * surprise
            )
            new_b2 = BetaParams(
                b2.alpha + (s2 / c) * surprise, b2.beta + (s2 / c) * surprise
            )
        elif m1 > m2:
            # Tie was a surprise: pull the pair together.
            new_b1 = BetaParams(b1.alpha, b1.beta + (s1 / c) * surprise)
            new_b2 = BetaParams(b2.alpha + (s2 / c) * surprise, b2.beta)
        else:
            new_b1 = BetaParams(b1.alpha + (s1 / c) * surprise, b1.beta)
            new_b2 = BetaParams(b2.alpha, b2.beta + (s2 / c) * surprise)

    new_first = replace(
        first, params=new_b1, observation_count=first.observation_count + 1
    )
    new_second = replace(
        second, params=new_b2, observation_count=second.observation_count + 1
    )
    return _reorder(state_i, state_j, new_first, new_second)


def easl_update(state: InstanceState, judgment: ScalarJudgment) -> InstanceState:
    """Fold one scalar score into a beta-parameterized state:
    alpha += s, beta += 1 - s. Adds exactly one unit of mass."""
    if not isinstance(state.params, BetaParams):
        raise ValueError("easl_update requires a beta-parameterized state")
    if judgment.item_id != state.item_id:
        raise ValueError(
            f"judgment for {judgment.item_id!r} applied to state {state.item_id!r}"
        )
    s = judgment.score
    return replace(
        state,
        params=BetaParams(state.params.alpha + s, state.params.beta + (1.0 - s)),
        observation_count=state.observation_count + 1,
    )


def da_aggregate(judgments: Sequence[ScalarJudgment]) -> float:
    """Direct assessment: the arithmetic mean of the scores."""
    if not judgments:
        raise ValueError("da_aggregate requires at least one judgment")
    return sum(j.score for j in judgments) / len(judgments)


# ---------------------------------------------------------------------------
# Deriving pairwise outcomes from a scored batch
# ---------------------------------------------------------------------------


def scores_to_outcomes(
    item_ids: Sequence[str],
    scores: Sequence[float],
    tie_threshold: float = 0.0,
) -> list[PairwiseOutcome]:
    """Turn n scored items into the C(n, 2) pairwise outcomes they imply.

    Items are ranked by score (descending; equal scores keep presentation
    order), and pairs are emitted sorted by rank positions - (0,1), (0,2),
    ..., (1,2), ... - so sequential application is deterministic. A score
    difference of at most ``tie_threshold`` reads as a tie.
    """
    if len(item_ids) != len(scores):
        raise ValueError("item_ids and scores must have equal length")
    if len(set(item_ids)) != len(item_ids):
        raise ValueError("duplicate item ids in batch")
    order = sorted(range(len(item_ids)), key=lambda k: (-scores[k], k))
    outcomes: list[PairwiseOutcome] = []
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            hi, lo = order[a], order[b]
            if abs(scores[hi] - scores[lo]) <= tie_threshold:
                outcomes.append(PairwiseOutcome.tie(item_ids[hi], item_ids[lo]))
            else:
                outcomes.append(PairwiseOutcome.win(item_ids[hi], item_ids[lo]))
    return outcomes


# ---------------------------------------------------------------------------
# Stateful model over a collection of items
# ---------------------------------------------------------------------------


@dataclass
class ScoreRow:
    item_id: str
    score: float
    variance: float
    count: int


class ModelState:
    """Per-item latent states for one method, updated sequentially.

    One logical writer owns an instance; reads return snapshots. DA items
    track their raw scores; the other methods hold an
    :class:`InstanceState` per item.
    """

    def __init__(self, cfg: ModelConfig, item_ids: Iterable[str]):
        self.cfg = cfg
        self._order: list[str] = []
        self._states: dict[str, InstanceState] = {}
        self._da_scores: dict[str, list[float]] = {}
        for item_id in item_ids:
            if item_id in self._states:
                raise ValueError(f"duplicate item id {item_id!r}")
            self._order.append(item_id)
            self._states[item_id] = InstanceState(item_id, cfg.initial_params())
            self._da_scores[item_id] = []

    @property
    def item_ids(self) -> list[str]:
        return list(self._order)

    def state(self, item_id: str) -> InstanceState:
        return self._states[item_id]

    def states(self) -> list[InstanceState]:
        return [self._states[i] for i in self._order]

    def _check_item(self, item_id: str) -> None:
        if item_id not in self._states:
            raise KeyError(f"unknown item {item_id!r}")

    def apply_scalar(self, item_id: str, score: float) -> None:
        """Apply one normalized scalar judgment (DA accumulation or EASL)."""
        self._check_item(item_id)
        judgment = ScalarJudgment(item_id, score)
        if self.cfg.method == Method.DA:
            self._da_scores[item_id].append(judgment.score)
            st = self._states[item_id]
            self._states[item_id] = replace(
                st, observation_count=st.observation_count + 1
            )
        elif self.cfg.method == Method.EASL:
            self._states[item_id] = easl_update(self._states[item_id], judgment)
        else:
            raise ValueError(
                f"scalar judgments are not consumed by method {self.cfg.method.value}"
            )

    def apply_pairwise(self, outcome: PairwiseOutcome) -> None:
        self._check_item(outcome.winner_id)
        self._check_item(outcome.loser_id)
        si = self._states[outcome.winner_id]
        sj = self._states[outcome.loser_id]
        if self.cfg.method == Method.RA_GAUSSIAN:
            ni, nj = ra_gaussian_update(si, sj, outcome, self.cfg)
        elif self.cfg.method == Method.RA_BETA:
            ni, nj = ra_beta_update(si, sj, outcome, self.cfg)
        else:
            raise ValueError(
                f"pairwise outcomes are not consumed by method {self.cfg.method.value}"
            )
        self._states[ni.item_id] = ni
        self._states[nj.item_id] = nj

    def apply_batch_scores(
        self, item_ids: Sequence[str], scores: Sequence[float]
    ) -> None:
        """Apply one completed HIT's normalized scores per the method.

        EASL and DA consume the n scalars in presentation order; the RA
        methods consume the derived pairwise outcomes (equal scores read
        as ties), applied sequentially in rank order.
        """
        if self.cfg.method in (Method.DA, Method.EASL):
            for item_id, score in zip(item_ids, scores):
                self.apply_scalar(item_id, score)
        else:
            for outcome in scores_to_outcomes(item_ids, scores):
                self.apply_pairwise(outcome)

    def score(self, item_id: str) -> float:
        self._check_item(item_id)
        if self.cfg.method == Method.DA:
            scores = self._da_scores[item_id]
            if not scores:
                return 0.5  # midpoint default before any judgment
            return da_aggregate([ScalarJudgment(item_id, s) for s in scores])
        return current_score(self._states[item_id])

    def variance(self, item_id: str) -> float:
        self._check_item(item_id)
        if self.cfg.method == Method.DA:
            scores = self._da_scores[item_id]
            if not scores:
                return 1.0 / 12.0  # uniform prior spread
            m = sum(scores) / len(scores)
            return sum((s - m) ** 2 for s in scores) / len(scores) ** 2
        return state_variance(self._states[item_id])

    def count(self, item_id: str) -> int:
        self._check_item(item_id)
        return self._states[item_id].observation_count

    def scores_table(self) -> list[ScoreRow]:
        """Ranked table, best first; ties broken by item id."""
        rows = [
            ScoreRow(i, self.score(i), self.variance(i), self.count(i))
            for i in self._order
        ]
        rows.sort(key=lambda r: (-r.score, r.item_id))
        return rows

    def scores_by_item(self) -> dict[str, float]:
        return {i: self.score(i) for i in self._order}

    # -- snapshot plumbing (used by persistence) ---------------------------

    def to_snapshot_dict(self) -> dict:
        items: dict[str, dict] = {}
        for item_id in self._order:
            st = self._states[item_id]
            entry: dict = {"count": st.observation_count}
            if isinstance(st.params, GaussianParams):
                entry["mu"] = st.params.mu
                entry["sigma2"] = st.params.sigma2
            else:
                entry["alpha"] = st.params.alpha
                entry["beta"] = st.params.beta
            if self.cfg.method == Method.DA:
                entry["scores"] = list(self._da_scores[item_id])
            items[item_id] = entry
        return {
            "config": self.cfg.to_dict(),
            "item_order": list(self._order),
            "items": items,
        }

    @classmethod
    def from_snapshot_dict(cls, d: dict) -> "ModelState":
        cfg = ModelConfig.from_dict(d["config"])
        model = cls(cfg, d["item_order"])
        for item_id, entry in d["items"].items():
            if "mu" in entry:
                params: GaussianParams | BetaParams = GaussianParams(
                    entry["mu"], entry["sigma2"]
                )
            else:
                params = BetaParams(entry["alpha"], entry["beta"])
            model._states[item_id] = InstanceState(item_id, params, entry["count"])
            if cfg.method == Method.DA:
                model._da_scores[item_id] = list(entry.get("scores", []))
        return model

    def equals(self, other: "ModelState") -> bool:
        """Field-for-field equality, used by the replay determinism checks."""
        return (
            self.cfg == other.cfg
            and self._order == other._order
            and self._states == other._states
            and self._da_scores == other._da_scores
        )
