"""Command-line entry point: ``socialtrack {run,simulate,evaluate,epidemic}``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, FormatError, FrameProcessingError, InputError, ParameterError

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_CONFIG = 4
EXIT_ANALYTICS = 5


def _cmd_run(args) -> int:
    from .pipeline import load_config, run, write_outputs

    config = load_config(args.config)
    out = config.output
    result = run(config, args.detections)
    summary_path = args.summary or out.summary
    write_outputs(
        result,
        reports=args.reports or out.reports,
        events=args.events or out.events,
        overlay=args.overlay or out.overlay,
        summary=summary_path,
    )
    if summary_path is None:
        from .records import dumps

        print(dumps(result.summary))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    from .evaluation import ScenarioConfig, generate_scenario, scenario_to_rows
    from .records import write_jsonl

    cfg = ScenarioConfig(
        frame_width=args.frame_width,
        frame_height=args.frame_height,
        n_people=args.people,
        n_frames=args.frames,
        speed_min=args.speed_min,
        speed_max=args.speed_max,
        noise_std=args.noise_std,
        miss_rate=args.miss_rate,
        fp_rate=args.fp_rate,
        descriptor_dim=args.descriptor_dim,
        fps=args.fps,
        seed=args.seed,
    )
    det_rows, truth_rows = scenario_to_rows(generate_scenario(cfg))
    write_jsonl(args.detections_out or sys.stdout, det_rows)
    if args.truth_out:
        write_jsonl(args.truth_out, truth_rows)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    from .evaluation import evaluate_frames
    from .geometry import ScoredBox
    from .records import dumps, parse_stream

    preds = {b.frame_id: [ScoredBox(r.box, r.confidence) for r in b.records]
             for b in parse_stream(args.predictions)}
    truth = {b.frame_id: [r.box for r in b.records] for b in parse_stream(args.ground_truth)}
    print(dumps(evaluate_frames(preds, truth, args.iou_threshold)))
    return EXIT_OK


def _cmd_epidemic(args) -> int:
    from .epidemic import EpidemicParams, EpidemicState, awareness, integrate, peak_infected
    from .records import dumps, write_jsonl

    params = EpidemicParams(args.beta, args.delta, args.N, args.k, args.awareness,
                            literal_infection_term=args.literal)
    traj = integrate(EpidemicState(args.N - args.I0, args.I0, 0.0), params, args.dt, args.steps)
    rows = ({"t": s.t, "S": s.S, "I": s.I, "R": s.R, "a": awareness(s, params)} for s in traj)
    write_jsonl(args.out or sys.stdout, rows)
    peak, t_peak = peak_infected(traj)
    print(dumps({"peak_infected": peak, "t_peak": t_peak}), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="socialtrack", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="track a detection stream and report proximity violations")
    r.add_argument("--detections", required=True, help="line-delimited JSON detection stream")
    r.add_argument("--config", help="JSON pipeline config")
    r.add_argument("--reports", help="per-frame report output (JSONL)")
    r.add_argument("--events", help="violation event log output (JSONL)")
    r.add_argument("--overlay", help="overlay output (JSONL)")
    r.add_argument("--summary", help="summary output (JSON); printed to stdout when omitted")
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("simulate", help="generate a synthetic scenario")
    s.add_argument("--frame-width", type=float, default=1280.0)
    s.add_argument("--frame-height", type=float, default=720.0)
    s.add_argument("--people", type=int, default=10)
    s.add_argument("--frames", type=int, default=100)
    s.add_argument("--speed-min", type=float, default=0.5)
    s.add_argument("--speed-max", type=float, default=3.0)
    s.add_argument("--noise-std", type=float, default=0.0)
    s.add_argument("--miss-rate", type=float, default=0.0)
    s.add_argument("--fp-rate", type=float, default=0.0)
    s.add_argument("--descriptor-dim", type=int, default=16)
    s.add_argument("--fps", type=float, default=25.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--detections-out", help="detections output (JSONL); stdout when omitted")
    s.add_argument("--truth-out", help="ground-truth output (JSONL)")
    s.set_defaults(func=_cmd_simulate)

    e = sub.add_parser("evaluate", help="AP/mAP of predictions against ground truth")
    e.add_argument("--predictions", required=True)
    e.add_argument("--ground-truth", required=True)
    e.add_argument("--iou-threshold", type=float, default=0.5)
    e.set_defaults(func=_cmd_evaluate)

    ep = sub.add_parser("epidemic", help="integrate the awareness SIR model")
    ep.add_argument("--beta", type=float, default=0.3)
    ep.add_argument("--delta", type=float, default=0.1)
    ep.add_argument("--N", type=float, default=1e4)
    ep.add_argument("--I0", type=float, default=10.0)
    ep.add_argument("--k", type=float, default=0.0)
    ep.add_argument("--awareness", choices=["none", "long-term", "short-term"], default="none")
    ep.add_argument("--dt", type=float, default=0.01 / 0.3)
    ep.add_argument("--steps", type=int, default=6000)
    ep.add_argument("--literal", action="store_true",
                    help="use the printed beta*I*(I/N)*a infection term (not mass conserving)")
    ep.add_argument("--out", help="trajectory output (JSONL); stdout when omitted")
    ep.set_defaults(func=_cmd_epidemic)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FormatError, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FrameProcessingError, ParameterError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYTICS


if __name__ == "__main__":
    sys.exit(main())
