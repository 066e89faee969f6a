"""Seeded Monte Carlo campaigns and their serialization.

Every sample owns a generator seeded from ``(master_seed, q, sample_index)``
through ``numpy.random.SeedSequence``; the resulting 64-bit seed is stored
with the row, and ``numpy.random.Generator(PCG64(seed))`` re-creates it.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .analysis import (
    DegenerateQuotient,
    abc_decomposition,
    copies_lower_bound,
    cost_threshold,
)
from .channels import (
    ProtocolParams,
    bio_protocol,
    bio_protocol_limit,
    exact_target,
    lmr_n,
)
from .cloning import DEFAULT_SIZE_CAP
from .matcore import frobenius_norm, trace_norm
from .states import random_hs_state, random_pure_state

CAMPAIGNS = ("sweep-q", "sweep-k", "verify", "cost-model")
FORMATS = ("csv", "json")
SIGMA_LAWS = ("hs", "pure")


class ConfigError(ValueError):
    pass


def _default_k_range():
    return [2 ** e for e in range(13)]


def _default_cost_ratios():
    return [0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0]


@dataclass
class ExperimentConfig:
    campaign: str = "sweep-q"
    t: float = 0.2
    n: int = 4
    q_range: list = field(default_factory=lambda: [1, 2, 3, 4])
    k_range: list = field(default_factory=_default_k_range)
    samples: int = 10_000
    master_seed: int = 20240607
    sigma_law: str = "hs"
    size_cap: int = DEFAULT_SIZE_CAP
    output_path: str = None
    format: str = "csv"
    cost_ratios: list = field(default_factory=_default_cost_ratios)

    def validate(self) -> "ExperimentConfig":
        if self.campaign not in CAMPAIGNS:
            raise ConfigError(f"unknown campaign {self.campaign!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.sigma_law not in SIGMA_LAWS:
            raise ConfigError(f"unknown sigma_law {self.sigma_law!r}")
        if not math.isfinite(self.t):
            raise ConfigError("t must be finite")
        if self.n < 1 or self.samples < 1:
            raise ConfigError("n and samples must be positive")
        if not self.q_range or any(q < 1 for q in self.q_range):
            raise ConfigError("q_range must list positive qubit counts")
        if not self.k_range or any(k < 1 for k in self.k_range):
            raise ConfigError("k_range must list positive integers")
        if any(2 ** q > self.size_cap for q in self.q_range):
            raise ConfigError("a qubit count in q_range exceeds size_cap")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        return self


def parse_int_list(text: str) -> list:
    """Parse ``"1..4"``, ``"1,2,8"`` or a mix such as ``"1..3,8"``."""
    out = []
    for part in str(text).replace(" ", "").split(","):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _parse_float_list(text: str) -> list:
    return [float(p) for p in str(text).replace(" ", "").split(",") if p]


_PARSERS = {
    "campaign": str,
    "t": float,
    "n": int,
    "q_range": parse_int_list,
    "k_range": parse_int_list,
    "samples": int,
    "master_seed": int,
    "sigma_law": str,
    "size_cap": int,
    "output_path": str,
    "format": str,
    "cost_ratios": _parse_float_list,
}


def parse_config_text(text: str) -> dict:
    """Read flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return values


def sample_seed(master_seed: int, q: int, sample_index: int) -> int:
    ss = np.random.SeedSequence([master_seed, q, sample_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_pair(seed: int, d: int, sigma_law: str = "hs"):
    rng = np.random.Generator(np.random.PCG64(seed))
    rho = random_hs_state(d, rng)
    if sigma_law == "pure":
        sigma = random_pure_state(d, rng).density_matrix()
    else:
        sigma = random_hs_state(d, rng)
    return np.asarray(rho), np.asarray(sigma)


@dataclass
class SampleRecord:
    q: int
    d: int
    sample_index: int
    seed: int
    t: float
    n: int
    q1: float
    q2: float
    eps_lmr_n: float
    eps_bio_limit: float
    trace_dist_rho_sigma: float
    status: str = "ok"


RECORD_FIELDS = [f.name for f in fields(SampleRecord)]


def evaluate_sample(cfg: ExperimentConfig, q: int, sample_index: int) -> SampleRecord:
    d = 2 ** q
    seed = sample_seed(cfg.master_seed, q, sample_index)
    rho, sigma = sample_pair(seed, d, cfg.sigma_law)
    params = ProtocolParams(cfg.t, cfg.n)
    target = exact_target(sigma, rho, cfg.t)
    abc = abc_decomposition(rho, sigma)
    rec = SampleRecord(
        q=q, d=d, sample_index=sample_index, seed=seed, t=cfg.t, n=cfg.n,
        q1=math.nan, q2=math.nan,
        eps_lmr_n=trace_norm(lmr_n(sigma, rho, params) - target),
        eps_bio_limit=trace_norm(bio_protocol_limit(sigma, rho, params) - target),
        trace_dist_rho_sigma=trace_norm(rho - sigma),
    )
    b2 = frobenius_norm(abc.b_mat)
    if abc.b_norm <= 1e-12 or b2 <= 1e-12:
        rec.status = "degenerate"
    else:
        rec.q1 = abc.a_norm / abc.b_norm
        rec.q2 = frobenius_norm(abc.a_mat) / b2
    return rec


def summarize_q(rows) -> list:
    """Per-q statistics over the non-degenerate rows."""
    out = []
    for q in sorted({r.q for r in rows}):
        sel = [r for r in rows if r.q == q]
        ok = [r for r in sel if r.status == "ok"]
        q1s = [r.q1 for r in ok]
        q2s = [r.q2 for r in ok]
        out.append({
            "q": q,
            "d": 2 ** q,
            "count": len(sel),
            "degenerate": len(sel) - len(ok),
            "mean_q1": float(np.mean(q1s)) if ok else math.nan,
            "min_q1": min(q1s) if ok else math.nan,
            "max_q1": max(q1s) if ok else math.nan,
            "mean_q2": float(np.mean(q2s)) if ok else math.nan,
            "min_q2": min(q2s) if ok else math.nan,
        })
    return out


def run_sweep_q(cfg: ExperimentConfig):
    """Improvement quotients and errors over random pairs, for each qubit count."""
    rows = [
        evaluate_sample(cfg, q, i)
        for q in cfg.q_range
        for i in range(cfg.samples)
    ]
    return [asdict(r) for r in rows], summarize_q(rows)


def _prescan(cfg: ExperimentConfig, q: int):
    # (q1, sample_index, seed) of the lowest and highest quotient among the draws
    scored = []
    for i in range(cfg.samples):
        seed = sample_seed(cfg.master_seed, q, i)
        rho, sigma = sample_pair(seed, 2 ** q, cfg.sigma_law)
        abc = abc_decomposition(rho, sigma)
        if abc.b_norm > 1e-12:
            scored.append((abc.a_norm / abc.b_norm, i, seed))
    if not scored:
        raise ValueError(f"every pre-scan sample at q={q} is degenerate")
    return {"min": min(scored), "max": max(scored)}


def fit_inverse_k(ks, gaps, tail: int = 5):
    """Least-squares ``gap ~ C/k`` in log space over the last ``tail`` points.

    Returns ``(C, max_relative_residual)``.
    """
    ks = np.asarray(ks, dtype=float)[-tail:]
    gaps = np.abs(np.asarray(gaps, dtype=float))[-tail:]
    log_c = float(np.mean(np.log(gaps * ks)))
    c = math.exp(log_c)
    resid = float(np.max(np.abs(gaps * ks / c - 1.0)))
    return c, resid


def k_sweep_rows(rho, sigma, t: float, n: int, k_range):
    target = exact_target(sigma, rho, t)

    def err(m):
        return trace_norm(m - target)

    eps_lmr = err(lmr_n(sigma, rho, ProtocolParams(t, n)))
    eps_inf = err(bio_protocol_limit(sigma, rho, ProtocolParams(t, n)))
    rows = []
    for k in k_range:
        rows.append({
            "k": k,
            "eps_lmr_n": eps_lmr,
            "eps_bio_1_to_nk": err(bio_protocol(sigma, rho, ProtocolParams(t, 1, n * k))),
            "eps_bio_n_to_nk": err(bio_protocol(sigma, rho, ProtocolParams(t, n, k))),
            "eps_lmr_nk": err(lmr_n(sigma, rho, ProtocolParams(t, n * k))),
            "eps_bio_limit": eps_inf,
        })
    return rows


def run_sweep_k(cfg: ExperimentConfig):
    """Error against k for the lowest- and highest-quotient pairs of a pre-scan."""
    rows, summary = [], []
    for q in cfg.q_range:
        for label, (qv, idx, seed) in _prescan(cfg, q).items():
            rho, sigma = sample_pair(seed, 2 ** q, cfg.sigma_law)
            sweep = k_sweep_rows(rho, sigma, cfg.t, cfg.n, cfg.k_range)
            head = {"representative": label, "q": q, "sample_index": idx,
                    "seed": seed, "q1": qv}
            rows.extend({**head, **r} for r in sweep)
            ks = [r["k"] for r in sweep]
            gaps = [r["eps_bio_n_to_nk"] - r["eps_bio_limit"] for r in sweep]
            c, resid = fit_inverse_k(ks, gaps)
            summary.append({**head, "eps_lmr_n": sweep[0]["eps_lmr_n"],
                            "eps_bio_limit": sweep[0]["eps_bio_limit"],
                            "fit_c": c, "fit_max_rel_residual": resid})
    return rows, summary


def run_cost_model(cfg: ExperimentConfig):
    """Cost threshold surface and extra-copy bound for one seeded pair per q."""
    rows, summary = [], []
    for q in cfg.q_range:
        seed = sample_seed(cfg.master_seed, q, 0)
        rho, sigma = sample_pair(seed, 2 ** q, cfg.sigma_law)
        abc = abc_decomposition(rho, sigma)
        if abc.b_norm <= 1e-12:
            summary.append({"q": q, "seed": seed, "status": "degenerate"})
            continue
        q1v = abc.a_norm / abc.b_norm
        summary.append({"q": q, "seed": seed, "status": "ok", "q1": q1v,
                        "copies_limit": cfg.n * (q1v - 1.0)})
        for k in cfg.k_range:
            if k < 2:
                continue
            threshold, asymptote = cost_threshold(cfg.n, k, abc)
            extra = copies_lower_bound(cfg.n, k, abc)
            for ratio in cfg.cost_ratios:
                rows.append({
                    "q": q, "k": k, "n": cfg.n, "q1": q1v,
                    "cost_ratio": ratio, "threshold": threshold,
                    "asymptote": asymptote, "copies_lower_bound": extra,
                    "favorable": int(ratio <= threshold),
                })
    return rows, summary


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def to_csv(rows, summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        header = list(rows[0])
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r[h]) for h in header])
    buf.write("# summary\n")
    if summary:
        keys = []
        for s in summary:
            keys.extend(k for k in s if k not in keys)
        w.writerow(keys)
        for s in summary:
            w.writerow([_fmt(s.get(k, "")) for k in keys])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(cfg: ExperimentConfig, rows, summary) -> str:
    doc = {
        "config": asdict(cfg),
        "rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows],
        "summary": [{k: _json_safe(v) for k, v in s.items()} for s in summary],
    }
    return json.dumps(doc, indent=1) + "\n"


def read_csv(text: str):
    """Split campaign CSV text back into ``(rows, summary)`` lists of dicts of strings."""
    data, _, tail = text.partition("# summary\n")
    rows = list(csv.DictReader(io.StringIO(data))) if data.strip() else []
    summary = list(csv.DictReader(io.StringIO(tail))) if tail.strip() else []
    return rows, summary
