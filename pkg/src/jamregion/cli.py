"""
Command-line interface: ``jamregion {gen,region,verify,montecarlo}``.

Powers are given in dBm on the command line and converted to watts once,
here. Every file written is accompanied by ``<file>.manifest.json``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 infeasible request.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .jammer import InfeasibleTargetError, NullSpaceUnavailableError
from .oracle import run_checks
from .pipeline import SUMMARY_FIELDS, RegionOptions, compute_regions, summarize
from .plot import regions_svg
from .region import regions_to_csv
from .scenario import (Geometry, ScenarioParams, dbm_to_watts, generate,
                       load_scenario, scenario_to_dict)

log = logging.getLogger('jamregion')

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
THREADS_ENV = 'JAMREGION_THREADS'


class UsageError(Exception):
    pass


def _point(text):
    try:
        x, y = (float(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite coordinate in {text!r}")
    return (x, y)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _default_threads():
    raw = os.environ.get(THREADS_ENV, '1')
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- shared flag groups -------------------------------------------------------

def _add_scenario_flags(p):
    g = p.add_argument_group('scenario generation')
    d = Geometry()
    for name in ('alice1', 'alice2', 'bob1', 'bob2', 'monitor'):
        xy = getattr(d, name)
        g.add_argument(f'--{name}', type=_point, default=xy, metavar='X,Y',
                       help=f"position in meters (default {xy[0]:g},{xy[1]:g})")
    prm = ScenarioParams()
    g.add_argument('--p1-dbm', type=float, default=prm.p1_dbm)
    g.add_argument('--p2-dbm', type=float, default=prm.p2_dbm)
    g.add_argument('--pmax-dbm', type=float, default=prm.pmax_dbm)
    g.add_argument('--sigma-dbm', type=float, default=prm.sigma1_dbm,
                   help="noise power at every receiver")
    g.add_argument('--nt', type=_positive_int, default=prm.nt)
    g.add_argument('--nr', type=_positive_int, default=prm.nr)
    g.add_argument('--rho', type=float, default=prm.rho,
                   help="self-interference coefficient stored in the scenario")
    g.add_argument('--hee-gain', type=float, default=None,
                   help="variance of loop-back channel entries (default: a0)")
    g.add_argument('--alpha-pl', type=float, default=prm.alpha_pl,
                   help="path-loss exponent")


def _params(args):
    return ScenarioParams(
        p1_dbm=args.p1_dbm, p2_dbm=args.p2_dbm, pmax_dbm=args.pmax_dbm,
        sigma1_dbm=args.sigma_dbm, sigma2_dbm=args.sigma_dbm,
        sigmam_dbm=args.sigma_dbm, nt=args.nt, nr=args.nr, rho=args.rho,
        hee_gain=args.hee_gain, alpha_pl=args.alpha_pl)


def _geometry(args):
    return Geometry(alice1=args.alice1, alice2=args.alice2, bob1=args.bob1,
                    bob2=args.bob2, monitor=args.monitor)


def _add_region_flags(p):
    g = p.add_argument_group('regions')
    g.add_argument('--receiver', choices=('mmse', 'mmse-sic'), default='mmse')
    g.add_argument('--time-sharing', choices=('on', 'off'), default='off',
                   help="hull the suspicious region (jamming time-sharing)")
    si = g.add_mutually_exclusive_group()
    si.add_argument('--si', type=float, default=None, metavar='RHO',
                    help="residual self-interference coefficient (linear)")
    si.add_argument('--si-db', type=float, default=None, metavar='DB',
                    help="residual self-interference coefficient in dB")
    g.add_argument('--null-space', action='store_true',
                   help="jam only in the loop-back null space")
    g.add_argument('--samples', type=_positive_int, default=128,
                   help="boundary samples (default 128)")


def _region_options(args):
    rho = args.si
    if args.si_db is not None:
        rho = 10.0 ** (args.si_db / 10.0)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    try:
        return RegionOptions(receiver=args.receiver,
                             time_sharing=args.time_sharing == 'on',
                             si_rho=rho, null_space=args.null_space,
                             n_samples=args.samples)
    except ValueError as e:
        raise UsageError(str(e)) from e


# -- output helpers -----------------------------------------------------------

def _sha256(path):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            h.update(chunk)
    return h.hexdigest()


def _jsonable(v):
    if isinstance(v, tuple):
        return list(v)
    return v


def _write_text(path, text):
    try:
        with open(path, 'w', newline='') as f:
            f.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from e


def _write_manifest(path, args, t0, inputs=(), extra=None):
    man = {
        'command': args.command,
        'flags': {k: _jsonable(v) for k, v in sorted(vars(args).items())
                  if k not in ('command', 'func')},
        'seed': getattr(args, 'seed', None),
        'version': __version__,
        'inputs': {p: _sha256(p) for p in inputs},
        'duration_s': round(time.perf_counter() - t0, 6),
    }
    if extra:
        man.update(extra)
    _write_text(path + '.manifest.json', json.dumps(man, indent=1) + '\n')


# -- commands -----------------------------------------------------------------

def cmd_gen(args):
    t0 = time.perf_counter()
    s = generate(_geometry(args), _params(args), args.seed)
    text = json.dumps(scenario_to_dict(s), indent=1) + '\n'
    _write_text(args.out, text)
    _write_manifest(args.out, args, t0)
    return EXIT_OK


def _load(path, pmax_dbm=None):
    try:
        s = load_scenario(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad scenario file {path}: {e}") from e
    if pmax_dbm is not None:
        s = s.replace(p_max=dbm_to_watts(pmax_dbm))
    return s


def cmd_region(args):
    t0 = time.perf_counter()
    opts = _region_options(args)
    s = _load(args.scenario, args.pmax_dbm)
    regions = compute_regions(s, opts)
    _write_text(args.out, regions_to_csv(regions.values()))
    summary = summarize(s, regions)
    _write_manifest(args.out, args, t0, inputs=[args.scenario],
                    extra={'summary': summary})
    if args.svg:
        _write_text(args.svg, regions_svg(regions, title=os.path.basename(args.scenario)))
        _write_manifest(args.svg, args, t0, inputs=[args.scenario])
    if summary['intersection_empty']:
        log.info("eavesdropping region is empty")
    return EXIT_OK


def _verify_one(s, rng, args):
    return run_checks(s, rng=rng, n_grid=args.n_grid, trials=args.trials)


def cmd_verify(args):
    t0 = time.perf_counter()
    if args.trials == 0:
        log.warning("--trials 0: random-probe checks are skipped and pass vacuously")
    if (args.scenario is None) == (args.random is None):
        raise UsageError("give either a scenario file or --random N")
    if args.scenario is not None:
        items = [(args.scenario, _load(args.scenario), np.random.default_rng(args.seed))]
    else:
        geo, prm = _geometry(args), _params(args)
        items = [(args.seed + k, generate(geo, prm, args.seed + k),
                  np.random.default_rng([args.seed, k]))
                 for k in range(args.random)]
    buf = io.StringIO()
    n_fail = 0
    for tag, s, rng in items:
        for rep in _verify_one(s, rng, args):
            row = {'scenario': tag, **rep.to_json()}
            buf.write(json.dumps(row) + '\n')
            n_fail += not rep.passed
    if args.out:
        _write_text(args.out, buf.getvalue())
        _write_manifest(args.out, args, t0,
                        inputs=[args.scenario] if args.scenario else (),
                        extra={'failures': n_fail})
    else:
        sys.stdout.write(buf.getvalue())
    if n_fail:
        log.error("%d oracle check(s) failed", n_fail)
        return EXIT_VERIFY
    return EXIT_OK


def _mc_worker(job):
    geo, prm, opts, seed = job
    s = generate(geo, prm, seed)
    return summarize(s, compute_regions(s, opts))


def run_montecarlo(geo, prm, opts, seed, n, threads=1):
    """Summaries of realizations ``seed, seed+1, ...``, in order."""
    jobs = [(geo, prm, opts, seed + k) for k in range(n)]
    if threads > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_mc_worker, jobs, chunksize=max(1, n // (4 * threads))))
    return [_mc_worker(j) for j in jobs]


def montecarlo_csv(rows, seed):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(('realization', 'seed') + SUMMARY_FIELDS)
    for k, row in enumerate(rows):
        w.writerow([k, seed + k] + [f'{row[f]:.9g}' for f in SUMMARY_FIELDS])
    means = [float(np.mean([r[f] for r in rows])) for f in SUMMARY_FIELDS]
    w.writerow(['mean', ''] + [f'{m:.9g}' for m in means])
    return buf.getvalue()


def cmd_montecarlo(args):
    t0 = time.perf_counter()
    if args.realizations < 1:
        raise UsageError("--realizations must be >= 1")
    opts = _region_options(args)
    rows = run_montecarlo(_geometry(args), _params(args), opts, args.seed,
                          args.realizations, args.threads)
    _write_text(args.out, montecarlo_csv(rows, args.seed))
    _write_manifest(args.out, args, t0)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog='jamregion',
        description="Eavesdropping rate regions for a jamming monitor "
                    "over two interfering links.")
    p.add_argument('-v', '--verbose', action='store_true')
    sub = p.add_subparsers(dest='command', required=True)

    g = sub.add_parser('gen', help="draw a random scenario")
    _add_scenario_flags(g)
    g.add_argument('--seed', type=int, default=0)
    g.add_argument('--out', required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser('region', help="compute regions for a scenario file")
    r.add_argument('scenario')
    r.add_argument('--pmax-dbm', type=float, default=None,
                   help="override the scenario's jamming budget")
    _add_region_flags(r)
    r.add_argument('--out', required=True, help="region CSV path")
    r.add_argument('--svg', default=None, help="optional SVG plot path")
    r.set_defaults(func=cmd_region)

    v = sub.add_parser('verify', help="check closed forms against the oracle")
    v.add_argument('scenario', nargs='?', default=None)
    v.add_argument('--random', type=_positive_int, default=None, metavar='N',
                   help="verify N random scenarios instead of a file")
    _add_scenario_flags(v)
    v.add_argument('--seed', type=int, default=0)
    v.add_argument('--trials', type=_nonneg_int, default=10_000,
                   help="random probes per check (0 skips them)")
    v.add_argument('--n-grid', type=int, default=10_000)
    v.add_argument('--out', default=None, help="JSON-lines path (default stdout)")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser('montecarlo', help="region statistics over many realizations")
    _add_scenario_flags(m)
    _add_region_flags(m)
    m.add_argument('--realizations', type=int, required=True)
    m.add_argument('--seed', type=int, default=0)
    m.add_argument('--threads', type=_positive_int, default=_default_threads(),
                   help=f"worker processes (default ${THREADS_ENV} or 1)")
    m.add_argument('--out', required=True)
    m.set_defaults(func=cmd_montecarlo)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(levelname)s: %(message)s', stream=sys.stderr)
    if getattr(args, 'n_grid', 100) < 100:
        parser.error("--n-grid must be >= 100")
    try:
        return args.func(args)
    except UsageError as e:
        log.error("%s", e)
        return EXIT_USAGE
    except (InfeasibleTargetError, NullSpaceUnavailableError) as e:
        log.error("infeasible request: %s", e)
        return EXIT_INFEASIBLE
    except ValueError as e:
        log.error("%s", e)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
