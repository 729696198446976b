"""Exhaustive desk-scale verification oracles.

Three questions are answered exactly, never statistically:

* correctness -- does every user's decode equal the demanded combination,
  for whole batteries of demand tuples and seeds;
* content security -- is the mutual information between the library and
  the full transmission exactly zero (for the keyed schemes) and strictly
  positive for the keyless baseline;
* demand privacy -- conditioned on an observer's own demand, is the total
  variation distance between the observer-view distributions induced by
  any two assignments of the other users' demands exactly zero.

Distributions are taken over every library value and every server
randomness value (and every demand tuple, for privacy), with exact
rational probabilities.  Two evaluation methods exist:

* "enumerate" runs the real placement and delivery once per state.  It
  assumes nothing and is the gold standard, but state spaces explode.
* "affine" exploits that, for a fixed library and fixed demands, every
  transmitted or cached bit is a GF(2)-affine function of the server's
  randomness bits.  One base run plus one run per randomness bit recover
  the affine map, after which the exact view distribution is the uniform
  distribution on an affine coset.  The affinity assumption is not taken
  on faith: every affine-method invocation spends a few real runs on
  randomly chosen probe points and fails loudly if the map misbehaves,
  and the test suite cross-checks the two methods against each other on
  instances small enough to enumerate.

"auto" picks enumerate for small state spaces and affine otherwise.  The
state cap bounds the states the chosen method actually walks through.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from math import log2
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .bits import BitBlock
from .errors import DomainError, ResourceLimitError, UsageError
from .library import (DemandVector, FileLibrary, demands_by_user,
                      linear_combination, subpacketize)
from .schemes import (CacheContent, DeliveryTranscript, RandomnessLayout, Scheme,
                      SchemeConfig, SchemeKind, ServerRandomness, derive_rng,
                      scheme_for)
from .shamir import reconstruct, share_set_from_blocks
from .topology import CacheSet, TopologySpec

DEFAULT_STATE_CAP = 1 << 28
AUTO_ENUMERATE_LIMIT = 1 << 14
MATERIALIZE_LIMIT = 1 << 22
AFFINITY_PROBES = 8


# ---- exact distributions ----

JointDistribution = Mapping[tuple[Hashable, Hashable], Fraction]


@dataclass(frozen=True)
class MutualInformationResult:
    is_zero: bool   # certified by exact factorization
    bits: float     # floating point value; exactly 0.0 when is_zero


def mutual_information(joint: JointDistribution) -> MutualInformationResult:
    """I(X;Y) of an exact joint distribution.

    Zero is certified by checking p(x, y) == p(x) p(y) in rational
    arithmetic; the returned bits value comes from the usual logarithmic
    sum and is only as exact as floating point.
    """
    if not joint:
        raise DomainError("empty distribution")
    total = Fraction(0)
    for pair, p in joint.items():
        if not isinstance(p, Fraction):
            raise DomainError(f"probability of {pair} is not a Fraction")
        if p < 0:
            raise DomainError(f"negative probability for {pair}")
        total += p
    if total != 1:
        raise DomainError(f"probabilities sum to {total}, not 1")
    px: dict[Hashable, Fraction] = {}
    py: dict[Hashable, Fraction] = {}
    support = {pair: p for pair, p in joint.items() if p > 0}
    for (x, y), p in support.items():
        px[x] = px.get(x, Fraction(0)) + p
        py[y] = py.get(y, Fraction(0)) + p
    factorized = (len(support) == len(px) * len(py)
                  and all(p == px[x] * py[y] for (x, y), p in support.items()))
    if factorized:
        return MutualInformationResult(True, 0.0)
    bits = 0.0
    for (x, y), p in support.items():
        bits += float(p) * (log2(p) - log2(px[x]) - log2(py[y]))
    return MutualInformationResult(False, bits)


def total_variation(p: Mapping[Hashable, Fraction],
                    q: Mapping[Hashable, Fraction]) -> Fraction:
    keys = set(p) | set(q)
    acc = Fraction(0)
    for k in keys:
        acc += abs(p.get(k, Fraction(0)) - q.get(k, Fraction(0)))
    return acc / 2


# ---- state packing ----

def pack_library(library: FileLibrary) -> int:
    value = 0
    for i, f in enumerate(library.files):
        value |= f.value << (i * library.file_bits)
    return value


def library_from_int(value: int, num_files: int, file_bits: int) -> FileLibrary:
    mask = (1 << file_bits) - 1
    return FileLibrary(tuple(
        BitBlock((value >> (i * file_bits)) & mask, file_bits)
        for i in range(num_files)))


def pack_demands(demands: Sequence[DemandVector]) -> int:
    value = 0
    for i, d in enumerate(demands):
        value |= d.coeffs << (i * d.num_files)
    return value


def demands_from_int(value: int, cfg: SchemeConfig) -> tuple[DemandVector, ...]:
    mask = (1 << cfg.num_files) - 1
    return tuple(
        DemandVector(g, (value >> (i * cfg.num_files)) & mask, cfg.num_files)
        for i, g in enumerate(cfg.topo.users()))


# ---- view extraction ----

class ViewExtractor:
    """Packs what an eavesdropper or a user observes into one integer.

    The transmission view is every bit on the broadcast link whose value
    can vary: payloads in index order plus, for the masking schemes, the
    masked demand vectors.  Cleartext demands are fixed public inputs in
    every check here, so they carry no information and are omitted.

    An observer view extends the transmission view with the observer's own
    demand and the full contents of its member caches.  Other users'
    cleartext demands are deliberately not included: for the cleartext
    schemes the interesting question is whether the protocol data leaks
    the demands, not whether a field literally labeled "demands" does.
    """

    def __init__(self, cfg: SchemeConfig):
        self.cfg = cfg
        self.topo = cfg.topo

    def transmission(self, transcript: DeliveryTranscript) -> tuple[int, int]:
        value = 0
        width = 0
        for S in self.topo.transmission_indices():
            block = transcript.payloads[S]
            value |= block.value << width
            width += block.length
        if self.cfg.kind.masks_demands:
            for g in self.topo.users():
                value |= transcript.masked_demands[g] << width
                width += self.cfg.num_files
        return value, width

    def observer(self, observer: CacheSet, caches: Sequence[CacheContent],
                 transcript: DeliveryTranscript, own_coeffs: int
                 ) -> tuple[int, int]:
        value, width = self.transmission(transcript)
        value |= own_coeffs << width
        width += self.cfg.num_files
        for c in observer:
            content = caches[c - 1]
            for store in (content.subfiles, content.key_shares,
                          content.whole_keys, content.coded_subkeys):
                for block in store.values():
                    value |= block.value << width
                    width += block.length
        return value, width


class _Runner:
    """Amortizes per-config setup for the many runs the oracles make."""

    def __init__(self, cfg: SchemeConfig):
        self.cfg = cfg
        self.scheme: Scheme = scheme_for(cfg)
        self.layout = RandomnessLayout.for_config(cfg)
        self.extractor = ViewExtractor(cfg)
        self.users = cfg.topo.users()

    def run_views(self, library: FileLibrary, demands: Sequence[DemandVector],
                  randomness: ServerRandomness,
                  with_observers: bool) -> tuple[int, dict[CacheSet, int]]:
        placement = self.scheme.place(library, randomness)
        table = subpacketize(library, self.cfg.topo)
        transcript = self.scheme.deliver(placement.secrets, table, demands)
        tview, _ = self.extractor.transmission(transcript)
        observer_views: dict[CacheSet, int] = {}
        if with_observers:
            by_user = demands_by_user(demands)
            for g in self.users:
                observer_views[g], _ = self.extractor.observer(
                    g, placement.caches, transcript, by_user[g].coeffs)
        return tview, observer_views


# ---- affine map recovery ----

@dataclass(frozen=True)
class AffineView:
    base: int
    cols: tuple[int, ...]  # contribution of each randomness bit

    def at(self, rand_value: int) -> int:
        acc = self.base
        i = 0
        while rand_value:
            if rand_value & 1:
                acc ^= self.cols[i]
            rand_value >>= 1
            i += 1
        return acc


def _recover_affine(runner: _Runner, library: FileLibrary,
                    demands: Sequence[DemandVector], with_observers: bool
                    ) -> tuple[AffineView, dict[CacheSet, AffineView]]:
    """One run at zero randomness plus one per randomness bit."""
    layout = runner.layout
    base_t, base_o = runner.run_views(library, demands,
                                      layout.unpack(0), with_observers)
    cols_t = []
    cols_o: dict[CacheSet, list[int]] = {g: [] for g in base_o}
    for bit in range(layout.total_bits):
        t, o = runner.run_views(library, demands,
                                layout.unpack(1 << bit), with_observers)
        cols_t.append(t ^ base_t)
        for g in o:
            cols_o[g].append(o[g] ^ base_o[g])
    tview = AffineView(base_t, tuple(cols_t))
    oviews = {g: AffineView(base_o[g], tuple(cols)) for g, cols in cols_o.items()}
    return tview, oviews


def _probe_affinity(runner: _Runner, library: FileLibrary,
                    demands: Sequence[DemandVector],
                    tview: AffineView, oviews: dict[CacheSet, AffineView],
                    rng: random.Random, probes: int = AFFINITY_PROBES) -> None:
    """Spot test the recovered map against real runs at random points."""
    bits = runner.layout.total_bits
    for _ in range(probes):
        point = rng.getrandbits(bits) if bits else 0
        t, o = runner.run_views(library, demands,
                                runner.layout.unpack(point), bool(oviews))
        if t != tview.at(point):
            raise AssertionError(
                "transmission view is not affine in the server randomness; "
                "the affine method cannot be used here")
        for g, view in oviews.items():
            if o[g] != view.at(point):
                raise AssertionError(
                    f"view of {g} is not affine in the server randomness")


def _rref_basis(cols: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis of the GF(2) span of the given masks."""
    basis: list[int] = []
    for col in cols:
        for b in basis:
            col = min(col, col ^ b)
        if col:
            basis.append(col)
            basis.sort(reverse=True)
    # Back-substitute so each pivot appears in exactly one basis vector.
    for i, b in enumerate(basis):
        pivot = 1 << (b.bit_length() - 1)
        for j in range(len(basis)):
            if j != i and basis[j] & pivot:
                basis[j] ^= b
    return tuple(sorted(basis, reverse=True))


def _reduce_point(point: int, basis: tuple[int, ...]) -> int:
    for b in basis:
        point = min(point, point ^ b)
    return point


def _coset_canonical(view: AffineView) -> tuple[tuple[int, ...], int]:
    basis = _rref_basis(view.cols)
    return basis, _reduce_point(view.base, basis)


def _expand_span(basis: Sequence[int]) -> "np.ndarray | list[int]":
    """All 2^rank span points via doubling; numpy when masks fit in 63 bits."""
    if all(b < (1 << 63) for b in basis):
        arr = np.zeros(1 << len(basis), dtype=np.uint64)
        size = 1
        for b in basis:
            arr[size:2 * size] = arr[:size] ^ np.uint64(b)
            size *= 2
        return arr
    points = [0]
    for b in basis:
        points += [p ^ b for p in points]
    return points


# ---- security ----

@dataclass(frozen=True)
class SecurityCheckResult:
    cfg: SchemeConfig
    demands: tuple[int, ...]
    method: str
    states: int
    certified_zero: bool
    mi_bits: float


def _security_states(cfg: SchemeConfig) -> tuple[int, int]:
    lib_states = 1 << (cfg.num_files * cfg.file_bits)
    rand_states = 1 << RandomnessLayout.for_config(cfg).total_bits
    return lib_states, rand_states


def _choose_method(method: str, states: int, cap: int) -> str:
    if method not in ("auto", "enumerate", "affine"):
        raise UsageError(f"unknown method {method!r}")
    if method == "auto":
        return "enumerate" if states <= AUTO_ENUMERATE_LIMIT else "affine"
    return method


def security_joint_enumerated(cfg: SchemeConfig,
                              demands: Sequence[DemandVector],
                              cap: int = DEFAULT_STATE_CAP,
                              jobs: int = 1) -> dict[tuple[int, int], Fraction]:
    """The exact joint distribution of (library, transmission view) by
    running the real scheme on every single state."""
    lib_states, rand_states = _security_states(cfg)
    states = lib_states * rand_states
    if states > cap:
        raise ResourceLimitError(
            f"enumeration of {states} states exceeds the cap {cap}")
    demand_coeffs = tuple(d.coeffs for d in demands)
    if jobs > 1:
        counts = _parallel_security_counts(cfg, demand_coeffs, lib_states, jobs)
    else:
        counts = _security_counts(cfg, demand_coeffs, range(lib_states))
    prob = Fraction(1, states)
    return {pair: n * prob for pair, n in counts.items()}


def _security_counts(cfg: SchemeConfig, demand_coeffs: tuple[int, ...],
                     lib_values: Iterable[int]) -> Counter:
    runner = _Runner(cfg)
    demands = tuple(DemandVector(g, c, cfg.num_files)
                    for g, c in zip(cfg.topo.users(), demand_coeffs))
    rand_states = 1 << runner.layout.total_bits
    counts: Counter = Counter()
    for w in lib_values:
        library = library_from_int(w, cfg.num_files, cfg.file_bits)
        for rv in range(rand_states):
            tview, _ = runner.run_views(library, demands,
                                        runner.layout.unpack(rv), False)
            counts[(w, tview)] += 1
    return counts


def _parallel_security_counts(cfg: SchemeConfig, demand_coeffs: tuple[int, ...],
                              lib_states: int, jobs: int) -> Counter:
    from concurrent.futures import ProcessPoolExecutor

    chunks = [range(start, lib_states, jobs) for start in range(jobs)]
    counts: Counter = Counter()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_security_counts, cfg, demand_coeffs, list(ch))
                   for ch in chunks]
        for fut in futures:
            counts.update(fut.result())
    return counts


def security_joint_affine(cfg: SchemeConfig, demands: Sequence[DemandVector],
                          cap: int = DEFAULT_STATE_CAP
                          ) -> dict[tuple[int, int], Fraction]:
    """The same joint distribution, from the per-library affine maps.

    Exists for cross-checks and for the rare non-factorized case; the
    certified-zero path in check_security_exact never materializes it.
    """
    lib_states, _ = _security_states(cfg)
    runner = _Runner(cfg)
    rng = derive_rng(cfg.seed, "affinity-probes")
    joint: dict[tuple[int, int], Fraction] = {}
    budget = 0
    for w in range(lib_states):
        library = library_from_int(w, cfg.num_files, cfg.file_bits)
        tview, _ = _recover_affine(runner, library, demands, False)
        _probe_affinity(runner, library, demands, tview, {}, rng)
        basis, base = _coset_canonical(tview)
        budget += 1 << len(basis)
        if budget > min(cap, MATERIALIZE_LIMIT):
            raise ResourceLimitError(
                "coset expansion exceeds the materialization limit")
        p = Fraction(1, lib_states * (1 << len(basis)))
        for point in _expand_span(basis):
            joint[(w, base ^ int(point))] = p
    return joint


def check_security_exact(cfg: SchemeConfig,
                         demands: Sequence[DemandVector] | None = None,
                         method: str = "auto",
                         cap: int = DEFAULT_STATE_CAP,
                         jobs: int = 1) -> SecurityCheckResult:
    """Exact I(library; transmission) for a fixed demand battery.

    The affine path certifies zero by comparing the canonical coset form
    of the view distribution across all library values: the conditional
    view distribution is uniform on an affine coset, so identical cosets
    for every library value mean the view is independent of the library.
    """
    if demands is None:
        from .library import cycling_one_hot_demands
        demands = cycling_one_hot_demands(cfg.topo, cfg.num_files)
    lib_states, rand_states = _security_states(cfg)
    chosen = _choose_method(method, lib_states * rand_states, cap)
    if chosen == "enumerate":
        joint = security_joint_enumerated(cfg, demands, cap, jobs)
        mi = mutual_information(joint)
        return SecurityCheckResult(cfg, tuple(d.coeffs for d in demands),
                                   "enumerate", lib_states * rand_states,
                                   mi.is_zero, mi.bits)
    runner = _Runner(cfg)
    rng = derive_rng(cfg.seed, "affinity-probes")
    states = lib_states * (runner.layout.total_bits + 1 + AFFINITY_PROBES)
    if states > cap:
        raise ResourceLimitError(
            f"affine recovery needs {states} runs, over the cap {cap}")
    cosets = []
    for w in range(lib_states):
        library = library_from_int(w, cfg.num_files, cfg.file_bits)
        tview, _ = _recover_affine(runner, library, demands, False)
        _probe_affinity(runner, library, demands, tview, {}, rng)
        cosets.append(_coset_canonical(tview))
    if all(c == cosets[0] for c in cosets):
        return SecurityCheckResult(cfg, tuple(d.coeffs for d in demands),
                                   "affine", states, True, 0.0)
    joint = security_joint_affine(cfg, demands, cap)
    mi = mutual_information(joint)
    return SecurityCheckResult(cfg, tuple(d.coeffs for d in demands),
                               "affine", states, mi.is_zero, mi.bits)


# ---- privacy ----

@dataclass(frozen=True)
class PrivacyCheckResult:
    cfg: SchemeConfig
    method: str
    states: int
    max_tv: Fraction
    per_observer: Mapping[CacheSet, Fraction]

    @property
    def certified_zero(self) -> bool:
        return self.max_tv == 0


def _privacy_states(cfg: SchemeConfig) -> tuple[int, int, int]:
    lib_states = 1 << (cfg.num_files * cfg.file_bits)
    rand_states = 1 << RandomnessLayout.for_config(cfg).total_bits
    demand_states = 1 << (cfg.num_files * cfg.topo.num_users)
    return lib_states, rand_states, demand_states


def _split_demand_value(cfg: SchemeConfig, dvalue: int, position: int
                        ) -> tuple[int, tuple[int, ...]]:
    """(own coefficients, other users' coefficients) of a packed tuple."""
    mask = (1 << cfg.num_files) - 1
    own = (dvalue >> (position * cfg.num_files)) & mask
    rest = tuple((dvalue >> (i * cfg.num_files)) & mask
                 for i in range(cfg.topo.num_users) if i != position)
    return own, rest


def check_privacy_exact(cfg: SchemeConfig,
                        observers: Sequence[CacheSet] | None = None,
                        method: str = "auto",
                        cap: int = DEFAULT_STATE_CAP) -> PrivacyCheckResult:
    """Exact worst-case TV distance between observer-view distributions.

    For every observer, every fixed library value and every fixed own
    demand, the distribution of the observer's view over the server's
    randomness is compared across all assignments of the other users'
    demands; any difference is a demand leak.  Equality for every fixed
    library is stronger than (and implies) independence in the mixture
    over libraries, since demands and library are drawn independently.

    A single-user topology has nothing to compare and reports zero.
    """
    users = cfg.topo.users()
    if observers is None:
        observers = users
    for g in observers:
        if g not in users:
            raise UsageError(f"{g} is not a user of this topology")
    lib_states, rand_states, demand_states = _privacy_states(cfg)
    states = lib_states * rand_states * demand_states
    chosen = _choose_method(method, states, cap)
    if cfg.topo.num_users == 1:
        return PrivacyCheckResult(cfg, chosen, 0, Fraction(0),
                                  {g: Fraction(0) for g in observers})
    if chosen == "enumerate":
        if states > cap:
            raise ResourceLimitError(
                f"enumeration of {states} states exceeds the cap {cap}")
        return _privacy_enumerated(cfg, observers, states)
    return _privacy_affine(cfg, observers, cap)


def _privacy_enumerated(cfg: SchemeConfig, observers: Sequence[CacheSet],
                        states: int) -> PrivacyCheckResult:
    runner = _Runner(cfg)
    users = cfg.topo.users()
    positions = {g: users.index(g) for g in observers}
    lib_states, rand_states, demand_states = _privacy_states(cfg)
    # counts[g][(library, own demand, other demands)][view]
    counts: dict[CacheSet, dict[tuple, Counter]] = {g: {} for g in observers}
    for dvalue in range(demand_states):
        demands = demands_from_int(dvalue, cfg)
        split = {g: _split_demand_value(cfg, dvalue, positions[g])
                 for g in observers}
        for w in range(lib_states):
            library = library_from_int(w, cfg.num_files, cfg.file_bits)
            for rv in range(rand_states):
                _, oviews = runner.run_views(library, demands,
                                             runner.layout.unpack(rv), True)
                for g in observers:
                    own, rest = split[g]
                    key = (w, own, rest)
                    counts[g].setdefault(key, Counter())[oviews[g]] += 1
    per_observer: dict[CacheSet, Fraction] = {}
    for g in observers:
        worst = Fraction(0)
        contexts: dict[tuple[int, int], list[Counter]] = {}
        for (w, own, _rest), counter in sorted(counts[g].items()):
            contexts.setdefault((w, own), []).append(counter)
        for group in contexts.values():
            ref = {v: Fraction(n, rand_states) for v, n in group[0].items()}
            for other in group[1:]:
                tv = total_variation(ref, {v: Fraction(n, rand_states)
                                           for v, n in other.items()})
                worst = max(worst, tv)
        per_observer[g] = worst
    max_tv = max(per_observer.values()) if per_observer else Fraction(0)
    return PrivacyCheckResult(cfg, "enumerate", states, max_tv, per_observer)


def _tv_from_sorted(ref, cur, denom: int) -> Fraction:
    if isinstance(ref, np.ndarray):
        if np.array_equal(ref, cur):
            return Fraction(0)
        values_r, counts_r = np.unique(ref, return_counts=True)
        values_c, counts_c = np.unique(cur, return_counts=True)
        pr = {int(v): int(n) for v, n in zip(values_r, counts_r)}
        pc = {int(v): int(n) for v, n in zip(values_c, counts_c)}
    else:
        if ref == cur:
            return Fraction(0)
        pr, pc = Counter(ref), Counter(cur)
    keys = set(pr) | set(pc)
    acc = sum(abs(pr.get(k, 0) - pc.get(k, 0)) for k in keys)
    return Fraction(acc, 2 * denom)


def _expand_images(view: AffineView) -> "np.ndarray | list[int]":
    """The exact multiset of map outputs over all randomness values, with
    the base point removed (doubling over every column keeps duplicate
    contributions, so multiplicities come out right by construction)."""
    if all(c < (1 << 63) for c in view.cols):
        arr = np.zeros(1 << len(view.cols), dtype=np.uint64)
        size = 1
        for c in view.cols:
            arr[size:2 * size] = arr[:size] ^ np.uint64(c)
            size *= 2
        return arr
    points = [0]
    for c in view.cols:
        points += [p ^ c for p in points]
    return points


def _privacy_affine(cfg: SchemeConfig, observers: Sequence[CacheSet],
                    cap: int) -> PrivacyCheckResult:
    """For a fixed library and fixed demands the observer view is the
    image of uniform randomness under an affine map, so its distribution
    is the image multiset of one base run plus the map's column span.  The
    linear part depends only on the library (demands shift the base
    point): the multiset is expanded once per (library, observer) and each
    demand tuple costs a single base-point run.  Random probes re-validate
    both facts against real runs."""
    runner = _Runner(cfg)
    users = cfg.topo.users()
    positions = {g: users.index(g) for g in observers}
    lib_states, rand_states, demand_states = _privacy_states(cfg)
    nbits = runner.layout.total_bits
    if rand_states > MATERIALIZE_LIMIT:
        raise ResourceLimitError(
            f"affine privacy would expand 2^{nbits} randomness values per "
            f"library, over the materialization limit {MATERIALIZE_LIMIT}")
    states = lib_states * rand_states * demand_states
    if states > cap:
        raise ResourceLimitError(
            f"privacy state space of {states} states exceeds the cap {cap}")
    rng = derive_rng(cfg.seed, "affinity-probes")

    # Image multisets per (observer, library); demands only shift them.
    images: dict[CacheSet, list] = {g: [] for g in observers}
    image_sets: dict[CacheSet, list[set[int]]] = {g: [] for g in observers}
    zero_demands = tuple(DemandVector(g, 0, cfg.num_files) for g in users)
    for w in range(lib_states):
        library = library_from_int(w, cfg.num_files, cfg.file_bits)
        tview, oviews = _recover_affine(runner, library, zero_demands, True)
        _probe_affinity(runner, library, zero_demands, tview, oviews, rng)
        for g in observers:
            img = _expand_images(oviews[g])
            images[g].append(np.sort(img) if isinstance(img, np.ndarray)
                             else sorted(img))
            image_sets[g].append({int(p) for p in img})

    # One base-point run per (demand tuple, library); every observer's base
    # falls out of the same run.  Occasionally spend an extra run at a
    # random randomness point to confirm the image set is demand-invariant.
    bases: dict[CacheSet, dict[tuple[int, int], int]] = {g: {} for g in observers}
    rest_index: dict[CacheSet, dict[int, dict[tuple[int, ...], int]]] = {
        g: {} for g in observers}
    check_every = max(1, (demand_states * lib_states) // (AFFINITY_PROBES * 4))
    step = 0
    for dvalue in range(demand_states):
        demands = demands_from_int(dvalue, cfg)
        for g in observers:
            own, rest = _split_demand_value(cfg, dvalue, positions[g])
            rest_index[g].setdefault(own, {})[rest] = dvalue
        for w in range(lib_states):
            library = library_from_int(w, cfg.num_files, cfg.file_bits)
            _, oviews = runner.run_views(library, demands,
                                         runner.layout.unpack(0), True)
            for g in observers:
                bases[g][(dvalue, w)] = oviews[g]
            step += 1
            if step % check_every == 0 and nbits:
                point = rng.getrandbits(nbits)
                _, probe = runner.run_views(library, demands,
                                            runner.layout.unpack(point), True)
                for g in observers:
                    if probe[g] ^ oviews[g] not in image_sets[g][w]:
                        raise AssertionError(
                            f"view columns of {g} depend on the demands; "
                            "the affine shortcut does not apply")

    # A sorted image multiset shifted by a base point stays a well-defined
    # multiset; two conditionals are equal iff the shifted multisets agree.
    def shifted(g: CacheSet, dvalue: int, w: int):
        base = bases[g][(dvalue, w)]
        img = images[g][w]
        if isinstance(img, np.ndarray):
            return np.sort(img ^ np.uint64(base))
        return sorted(p ^ base for p in img)

    per_observer: dict[CacheSet, Fraction] = {}
    for g in observers:
        worst = Fraction(0)
        for own, rest_map in sorted(rest_index[g].items()):
            rests = sorted(rest_map)
            for w in range(lib_states):
                ref = shifted(g, rest_map[rests[0]], w)
                for rest in rests[1:]:
                    cur = shifted(g, rest_map[rest], w)
                    worst = max(worst, _tv_from_sorted(ref, cur, rand_states))
        per_observer[g] = worst
    max_tv = max(per_observer.values()) if per_observer else Fraction(0)
    return PrivacyCheckResult(cfg, "affine", states, max_tv, per_observer)


# ---- correctness ----

@dataclass(frozen=True)
class CorrectnessFailure:
    seed: int
    battery: int
    user: CacheSet
    expected: str  # hex
    decoded: str   # hex


@dataclass(frozen=True)
class CorrectnessReport:
    cfg: SchemeConfig
    seeds: tuple[int, ...]
    batteries: int
    decodes: int
    failures: tuple[CorrectnessFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_correctness(cfg: SchemeConfig,
                      batteries: Iterable[Sequence[DemandVector]],
                      seeds: Sequence[int] = (0,)) -> CorrectnessReport:
    """Decode every user for every demand battery and seed, comparing
    against the independently computed linear combination of whole files.
    Placement does not depend on demands, so it runs once per seed."""
    batteries = [tuple(b) for b in batteries]
    failures: list[CorrectnessFailure] = []
    decodes = 0
    for seed in seeds:
        run_cfg = replace(cfg, seed=seed)
        scheme = scheme_for(run_cfg)
        library = FileLibrary.random(derive_rng(seed, "library"),
                                     cfg.num_files, cfg.file_bits)
        randomness = ServerRandomness.draw(run_cfg, derive_rng(seed, "placement"))
        placement = scheme.place(library, randomness)
        table = subpacketize(library, cfg.topo)
        for bi, battery in enumerate(batteries):
            transcript = scheme.deliver(placement.secrets, table, battery)
            for demand in battery:
                member_caches = [placement.caches[c - 1] for c in demand.user]
                decoded = scheme.decode(demand.user, member_caches,
                                        transcript, demand)
                expected = linear_combination(demand, library)
                decodes += 1
                if decoded != expected:
                    failures.append(CorrectnessFailure(
                        seed, bi, demand.user,
                        expected.to_bytes().hex(), decoded.to_bytes().hex()))
    return CorrectnessReport(cfg, tuple(seeds), len(batteries), decodes,
                             tuple(failures))


# ---- structural key placement ----

@dataclass(frozen=True)
class SharePlacementReport:
    cfg: SchemeConfig
    keys_checked: int
    ok: bool
    problems: tuple[str, ...]


def check_share_placement_secrecy(cfg: SchemeConfig) -> SharePlacementReport:
    """Structural audit of where key material landed.

    For the share-splitting kinds: the shares of each user's superposed
    key sit in exactly that user's caches, every other user reaches at
    most r-1 of them (below the reconstruction threshold), and the full
    share set reconstructs the key the server recorded.  For the coded
    kind: the blocks of each payload key sit in exactly the caches its
    transmission index names, so users outside it reach fewer than the r
    blocks decoding needs.  For the whole-key kind: each key sits in
    exactly the named caches (exposure to intersecting users is by
    design).  The keyless kind has nothing to audit.
    """
    scheme = scheme_for(cfg)
    library = FileLibrary.random(derive_rng(cfg.seed, "library"),
                                 cfg.num_files, cfg.file_bits)
    placement = scheme.place(library)
    caches = placement.caches
    topo = cfg.topo
    r = topo.access_degree
    problems: list[str] = []
    checked = 0

    def holders(predicate) -> set[int]:
        return {c.index for c in caches if predicate(c)}

    if cfg.kind.masks_demands and not cfg.broadcast:
        field = cfg.key_field
        for (g, T), secret in placement.secrets.superposed_keys.items():
            checked += 1
            held = holders(lambda c: (g, T) in c.key_shares)
            if held != set(g):
                problems.append(f"shares of D[{g},{T}] live in {sorted(held)}")
            for other in topo.users():
                if other != g and len(set(other) & held) >= r:
                    problems.append(
                        f"user {other} reaches {r} shares of D[{g},{T}]")
            blocks = [caches[c - 1].key_shares[(g, T)] for c in g]
            rebuilt = reconstruct(share_set_from_blocks(blocks, field,
                                                        secret.length))
            if rebuilt != secret:
                problems.append(f"shares of D[{g},{T}] do not reconstruct it")
    elif cfg.kind.stores_keys_coded:
        code = cfg.key_code
        for S, key in placement.secrets.randomness.payload_keys.items():
            checked += 1
            held = holders(lambda c: S in c.coded_subkeys)
            if held != set(S):
                problems.append(f"blocks of V[{S}] live in {sorted(held)}")
            for g in topo.users():
                reach = len(set(g) & held)
                if not set(g) <= set(S) and reach >= code.dimension:
                    problems.append(f"outside user {g} reaches {reach} "
                                    f"blocks of V[{S}]")
    elif cfg.kind.stores_keys_whole:
        for S, key in placement.secrets.randomness.payload_keys.items():
            checked += 1
            held = holders(lambda c: S in c.whole_keys)
            if held != set(S):
                problems.append(f"copies of V[{S}] live in {sorted(held)}")
            for c in S:
                if caches[c - 1].whole_keys[S] != key:
                    problems.append(f"cache {c} holds a wrong copy of V[{S}]")
    return SharePlacementReport(cfg, checked, not problems, tuple(problems))


# ---- default sweeps ----

def tiny_sweep_topologies() -> tuple[tuple[int, int, int], ...]:
    """(C, r, t) triples small enough for the exact oracles: C in {3, 4},
    r in {2, 3}, every valid t."""
    triples = []
    for C in (3, 4):
        for r in (2, 3):
            if r > C:
                continue
            for t in range(0, C - r + 1):
                triples.append((C, r, t))
    return tuple(triples)


def tiny_config(kind: SchemeKind, C: int, r: int, t: int,
                num_files: int = 2, seed: int = 0) -> SchemeConfig:
    """One-bit-subfile instance: F equals the subpacketization."""
    topo = TopologySpec(C, r, t)
    return SchemeConfig(topo, num_files, topo.num_subfile_indices, kind,
                        seed=seed)


def security_suite(method: str = "auto", cap: int = DEFAULT_STATE_CAP,
                   jobs: int = 1,
                   kinds: Sequence[SchemeKind] = (SchemeKind.S_LFR,
                                                  SchemeKind.IS_LFR,
                                                  SchemeKind.SP_LFR)
                   ) -> list[SecurityCheckResult]:
    """Exact security over the tiny sweep, then the keyless negative
    control (expected nonzero) on the smallest topology."""
    results = []
    for C, r, t in tiny_sweep_topologies():
        for kind in kinds:
            results.append(check_security_exact(
                tiny_config(kind, C, r, t), method=method, cap=cap, jobs=jobs))
    results.append(check_security_exact(
        tiny_config(SchemeKind.LFR, 3, 2, 1), method=method, cap=cap,
        jobs=jobs))
    return results


def privacy_suite(method: str = "auto", cap: int = DEFAULT_STATE_CAP
                  ) -> list[PrivacyCheckResult]:
    """Exact privacy on the instances whose state space fits the exact
    oracles (C = 3; larger topologies exceed the materialization limit),
    then the cleartext negative control (expected nonzero)."""
    results = []
    for C, r, t in tiny_sweep_topologies():
        if C != 3:
            continue
        for kind in (SchemeKind.SP_LFR, SchemeKind.P_LFR):
            results.append(check_privacy_exact(
                tiny_config(kind, C, r, t), method=method, cap=cap))
    results.append(check_privacy_exact(
        tiny_config(SchemeKind.S_LFR, 3, 2, 1), method=method, cap=cap))
    return results
