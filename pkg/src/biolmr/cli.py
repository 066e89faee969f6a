"""``bio-lmr`` command line entry point."""

import argparse
import sys
from dataclasses import asdict

from . import campaigns
from .campaigns import ConfigError, ExperimentConfig, parse_int_list
from .verify import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit code 2 is reserved for verify
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="bio-lmr",
        description="Density-matrix exponentiation experiments with biomimetic cloning.",
    )
    p.add_argument("campaign", choices=campaigns.CAMPAIGNS)
    p.add_argument("--config", help="flat 'key = value' config file")
    p.add_argument("--seed", type=int, dest="master_seed")
    p.add_argument("--samples", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--q", dest="q_range", help="qubit counts, e.g. 1..4 or 1,3")
    p.add_argument("--k-range", dest="k_range", help="k values, e.g. 1,2,4,8")
    p.add_argument("--sigma-law", dest="sigma_law", choices=campaigns.SIGMA_LAWS)
    p.add_argument("--out", dest="output_path")
    p.add_argument("--format", choices=campaigns.FORMATS)
    return p


def load_config(args) -> ExperimentConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(campaigns.parse_config_text(fh.read()))
    for key in ("master_seed", "samples", "t", "n", "sigma_law", "output_path", "format"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    for key in ("q_range", "k_range"):
        v = getattr(args, key)
        if v is not None:
            values[key] = parse_int_list(v)
    values["campaign"] = args.campaign
    return ExperimentConfig(**values).validate()


def _render_verify(cfg, results) -> str:
    lines = [r.line() for r in results]
    if cfg.format == "json":
        import json
        return json.dumps({"config": asdict(cfg), "checks": [asdict(r) for r in results]},
                          indent=1) + "\n"
    return "\n".join(lines) + "\n"


def run(cfg: ExperimentConfig):
    """Execute a campaign; returns ``(text, exit_code)``."""
    if cfg.campaign == "verify":
        results = run_checks(cfg.master_seed)
        code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
        return _render_verify(cfg, results), code
    runner = {
        "sweep-q": campaigns.run_sweep_q,
        "sweep-k": campaigns.run_sweep_k,
        "cost-model": campaigns.run_cost_model,
    }[cfg.campaign]
    rows, summary = runner(cfg)
    if cfg.format == "json":
        return campaigns.to_json(cfg, rows, summary), EXIT_OK
    return campaigns.to_csv(rows, summary), EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text, code = run(cfg)
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        if cfg.campaign == "verify":
            sys.stdout.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
