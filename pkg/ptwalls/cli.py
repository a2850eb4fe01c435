"""Command-line entry point: ``ptwalls {walls,ext,hull,invariants,report,selftest}``."""
import argparse
import hashlib
import json
import os.path as osp
import random
import sys
from collections import OrderedDict

from omegaconf import OmegaConf
from tqdm import tqdm

from ptwalls.algebra import ConfigError, PtwallsError, WindowTooSmallError, rank
from ptwalls.curvechains import XiClass, rank_stratify, xi_composition_matrix
from ptwalls.scenarios import build_scenario
from ptwalls.thomwhitney import tw_bracket, tw_differential
from ptwalls.utils import get_env_info, get_root_logger, get_time_str, load_options, scenario_from_string

SCHEMA_VERSION = 1


def parse_range(text):
    """'-3..3' -> (-3, 3)."""
    lo, sep, hi = text.partition('..')
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f'range must look like -3..3, got {text!r}') from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-opt', type=str, default=None, help='Path to option YAML file.')
    common.add_argument('--scenario', type=str, default=None, help='single:n, disjoint:n1,...,nr or chain:n1,n2.')
    common.add_argument('--window-margin', type=str, default=None, help='Weight-window margin or "auto".')
    common.add_argument('--format', choices=('text', 'json'), default=None)
    common.add_argument('--out', type=str, default=None, help='Write the report here instead of stdout.')
    common.add_argument('--progress', action='store_true', help='Progress bars per torus weight on stderr.')
    common.add_argument(
        '--force_yml', nargs='+', default=None, help='Force to update yml files. Examples: hull:order=4')

    parser = argparse.ArgumentParser(prog='ptwalls', description='Point-class moduli near surface contractions.')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('walls', parents=[common], help='Wall equations, chambers and component reports.')
    ext = sub.add_parser('ext', parents=[common], help='Ext dimension tables.')
    ext.add_argument('--pair', type=str, default=None, help='Two sheaf names, e.g. OC,OC(-1)[1].')
    ext.add_argument('--range', type=parse_range, default=None, help='Twist range for Hom tables, e.g. -3..3.')
    for name in ('hull', 'invariants'):
        p = sub.add_parser(name, parents=[common], help=f'{name.capitalize()} at a target point.')
        p.add_argument('--target', type=str, default=None)
        p.add_argument('--order', type=int, default=None)
    report = sub.add_parser('report', parents=[common], help='All sections.')
    report.add_argument('--order', type=int, default=None)
    sub.add_parser('selftest', parents=[common], help='Run the acceptance checks.')
    return parser


def options_from_args(args):
    overrides = OrderedDict()
    if args.scenario is not None:
        overrides['scenario'] = scenario_from_string(args.scenario)
    elif args.command == 'selftest' and args.opt is None:
        overrides['scenario'] = scenario_from_string('single:3')
    if args.window_margin is not None:
        margin = args.window_margin
        overrides['window'] = {'margin': margin if margin == 'auto' else _int_flag(margin, '--window-margin')}
    if args.format is not None or args.out is not None:
        overrides['report'] = {k: v for k, v in (('format', args.format), ('out', args.out)) if v is not None}
    if getattr(args, 'order', None) is not None:
        overrides['hull'] = {'order': args.order}
    opt = load_options(args.opt, overrides, args.force_yml)
    opt['progress'] = bool(args.progress)
    return opt


def _int_flag(value, flag):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f'{flag}: expected an integer or "auto", got {value!r}.') from None


def config_hash(opt):
    """sha256 of the options that determine report content."""
    payload = {k: v for k, v in opt.items() if k not in ('report', 'path', 'progress')}
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def _default_target(scenario):
    targets = scenario.report_targets()
    if not targets:
        raise ConfigError(f'--target is required for {scenario.label}; choose from {list(scenario.targets)}.')
    return targets[0]


def run_command(command, scenario, args):
    """Report sections for one command."""
    if command == 'walls':
        return [scenario.walls_section()]
    if command == 'ext':
        return [scenario.ext_section(args.pair, args.range)]
    if command == 'hull':
        return [scenario.hull_section(args.target or _default_target(scenario), args.order)]
    if command == 'invariants':
        return [scenario.invariants_section(args.target, args.order)]
    sections = [scenario.walls_section(), scenario.ext_section()]
    for target in scenario.report_targets():
        sections.append(scenario.hull_section(target, args.order))
    return sections


def render_json(opt, sections):
    digest = config_hash(opt)
    doc = OrderedDict(schema_version=SCHEMA_VERSION)
    doc['config'] = {'hash': digest, 'options': {k: v for k, v in opt.items() if k != 'progress'}}
    doc['sections'] = [dict(section, config_hash=digest) for section in sections]
    return json.dumps(doc, sort_keys=True, separators=(',', ':'), default=str) + '\n'


def _text_lines(value, indent):
    pad = ' ' * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f'{pad}{k}:')
                lines.extend(_text_lines(v, indent + 2))
            else:
                lines.append(f'{pad}{k}: {v}')
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                inner = _text_lines(item, indent + 2) or ['{}']
                lines.append(f'{pad}- {inner[0].strip()}')
                lines.extend(inner[1:])
            else:
                lines.append(f'{pad}- {item}')
    else:
        lines.append(f'{pad}{value}')
    return lines


def render_text(opt, sections):
    digest = config_hash(opt)
    lines = [f'ptwalls report (schema {SCHEMA_VERSION}), config {digest[:12]}']
    for section in sections:
        lines.append('')
        lines.append(f'== {section["section"]} ==')
        lines.extend(_text_lines({k: v for k, v in section.items() if k != 'section'}, 0))
    return '\n'.join(lines) + '\n'


def write_report(opt, sections):
    render = render_json if opt['report']['format'] == 'json' else render_text
    text = render(opt, sections)
    out = opt['report'].get('out')
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return text


# ----------------------------------------------------------------------------
# selftest
# ----------------------------------------------------------------------------


def _scenario(opt, text):
    sub = OrderedDict((k, v) for k, v in opt.items())
    sub['scenario'] = scenario_from_string(text)
    sub['beta'] = None
    return build_scenario(sub)


def _check_walls(opt):
    chain = _scenario(opt, 'chain:3,3').arrangement
    forms = {w.label: w.form for w in chain.walls}
    disjoint = _scenario(opt, 'disjoint:3,4').arrangement
    ok = (forms == {'W1': (-3, 1), 'W2': (1, -3), 'W12': (1, 1)} and len(chain.chambers) == 6
          and len(disjoint.chambers) == 4)
    return ok, f'chain walls {forms}, {len(chain.chambers)} chain chambers, {len(disjoint.chambers)} disjoint chambers'


def _check_hom_table(opt):
    section = _scenario(opt, 'chain:3,3').ext_section(value_range=(-3, 3))
    return section['agrees'], f'{len(section["hom_table"])} twists compared'


def _check_single_ext(opt):
    scenario = _scenario(opt, 'single:3')
    rows = {(r['source'], r['target']): r['dimensions'] for r in scenario.ext_section(value_range=(0, 0))['pairs']}
    ee = [rows[('E', 'E')].get(str(k), 0) for k in range(4)]
    oc = rows[('O_C', 'O_C(-1)')].get('2', 0)
    return ee == [2, 5, 4, 1] and oc == 3, f'RHom(E, E) = {ee}, Ext^2(O_C, O_C(-1)) = {oc}'


def _check_brackets(opt):
    lifts = _scenario(opt, 'single:3').lifts
    ok = all(tw_bracket(lifts.alpha(i), lifts.beta(j)) == lifts.gamma(i - j) for i in range(1, 4) for j in (0, 1))
    ok = ok and tw_differential(lifts.mu()) == lifts.gamma(0) and tw_differential(lifts.eta()) == lifts.gamma(3)
    return ok, '[alpha_i, beta_j] = gamma_(i-j), d mu = gamma_0, d eta = gamma_3'


def _check_single_hull(opt):
    section = _scenario(opt, 'single:3').hull_section('wall_point')
    verdict = section['verdict']['verdict']
    matches = section['invariants']['matches_hankel']
    return verdict == 'hull-equals-candidate' and matches, f'verdict {verdict}, Hankel presentation {matches}'


def _check_triple_point(opt):
    section = _scenario(opt, 'chain:3,3').hull_section('triple_point')
    verdict = section['verdict']['verdict']
    return verdict == 'hull-equals-candidate', f'verdict {verdict}'


def _check_rank_strata(opt, samples=50):
    rng = random.Random(0)
    bad = 0
    for text in ('single:4', 'chain:3,3'):
        size = len(XiClass.dual(text, 0).coeffs)
        for _ in range(samples):
            xi = XiClass(text, [rng.randint(-3, 3) for _ in range(size)])
            if rank_stratify(xi).rank != rank(xi_composition_matrix(xi)):
                bad += 1
    return bad == 0, f'{2 * samples - bad}/{2 * samples} random classes agree'


def _check_components(opt):
    disjoint = _scenario(opt, 'disjoint:3,4')
    report = next(c for c in disjoint.walls_section()['components'] if c['chamber'] == '{1,2}')
    names = [c['name'] for c in report['components']]
    chain = _scenario(opt, 'chain:3,3')
    c3 = next(c for c in chain.walls_section()['components'] if c['chamber'] == 'C3')
    chain_names = [c['name'] for c in c3['components']]
    ok = names == ['S', 'P^2', 'P^3'] and chain_names == ['S', 'Bl_pt P^2', 'P^3'] and len(c3['gluing']) == 3
    return ok, f'disjoint {{1,2}}: {names}; chain C3: {chain_names}'


def _check_determinism(opt):
    scenario = _scenario(opt, 'chain:3,3')
    first = render_json(opt, [scenario.walls_section()])
    second = render_json(opt, [_scenario(opt, 'chain:3,3').walls_section()])
    return first == second, f'{len(first)} bytes'


SELFTEST_CHECKS = [
    ('wall equations and chambers', _check_walls),
    ('component reports', _check_components),
    ('rank stratification', _check_rank_strata),
    ('json determinism', _check_determinism),
    ('Hom dimension table chain(3,3)', _check_hom_table),
    ('Ext dimensions single(3)', _check_single_ext),
    ('bracket identities single(3)', _check_brackets),
    ('wall point hull single(3)', _check_single_hull),
    ('triple point hull chain(3,3)', _check_triple_point),
]


def selftest(opt, checks=None):
    """Run the acceptance checks; (section, all passed)."""
    logger = get_root_logger()
    results = []
    for name, check in tqdm(checks or SELFTEST_CHECKS, file=sys.stderr, disable=not opt.get('progress')):
        try:
            ok, detail = check(opt)
            status = 'pass' if ok else 'fail'
        except WindowTooSmallError as error:
            status, detail = 'environment-limited', str(error)
        except (PtwallsError, ValueError) as error:
            status, detail = 'fail', f'{error.__class__.__name__}: {error}'
        logger.info(f'selftest {name}: {status} ({detail})')
        results.append({'check': name, 'status': status, 'detail': detail})
    passed = sum(r['status'] == 'pass' for r in results)
    section = OrderedDict(section='selftest', passed=passed, total=len(results), results=results)
    return section, passed == len(results)


# ----------------------------------------------------------------------------
# main
# ----------------------------------------------------------------------------


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logger = get_root_logger()
    try:
        opt = options_from_args(args)
        log_dir = opt['path'].get('log')
        if log_dir:
            log_file = osp.join(log_dir, f'{args.command}_{opt["name"]}_{get_time_str()}.log')
            logger = get_root_logger(log_file=log_file)
            logger.info(get_env_info())
        logger.info('\n' + OmegaConf.to_yaml(opt))
        if args.command == 'selftest':
            section, ok = selftest(opt)
            write_report(opt, [section])
            return 0 if ok else 1
        scenario = build_scenario(opt)
        write_report(opt, run_command(args.command, scenario, args))
    except ConfigError as error:
        logger.error(f'Config error: {error}')
        return 2
    except (PtwallsError, ValueError) as error:
        logger.error(f'{error.__class__.__name__}: {error}')
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
