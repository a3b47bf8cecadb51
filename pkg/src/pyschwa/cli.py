"""
Command line interface of pyschwa.

Usage::

    pyschwa [-v] COMMAND [options]

Every command writes its resolved configuration to stderr as ``# key =
value`` lines before doing any work. Exit codes are 0 on success, 2 for
usage and data errors and 3 when training fails numerically.
"""

import logging
import os
import sys
from argparse import ArgumentParser
from dataclasses import dataclass, asdict, field, fields
from multiprocessing.dummy import Pool as ThreadPool

from pyschwa import __version__
from pyschwa.align import WEAK_POLICIES
from pyschwa.baseline import load_rules
from pyschwa.evaluation import error_report, format_table, format_kv
from pyschwa.features import FeatureConfig, FeatureIndexError
from pyschwa.lexicon import (
    SplitSpec, parse_lexicon, write_lexicon, format_lexicon, stats,
    read_instances, write_instances)
from pyschwa.models import (
    HYPERS, MODEL_KINDS, GbdtModel, TrainingDiverged, save_model, load_model,
    dump_trees)
from pyschwa.pipeline import (
    Dataset, build_dataset, split_dataset, make_predictor, train_model,
    evaluate_predictor, transcribe, grid_search)
from pyschwa.script import decode_words, render
from pyschwa.synthetic import generate_corpus
from pyschwa.util import format_percent


__all__ = [
    'RunConfig',
    'UsageError',
    'main',
    'make_parser',
]

logger = logging.getLogger(__name__)

SCRIPTS = ('devanagari', 'gurmukhi')
SPLITS = ('train', 'dev', 'test', 'all')


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:

    """Resolved settings of one command invocation."""

    command: str
    inputs: tuple = ()
    output: str = None
    features: FeatureConfig = None
    kind: str = None
    hyper: object = None
    split: SplitSpec = None
    seed: int = 0
    weak_policy: str = 'retain'
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is not None and self.kind not in MODEL_KINDS:
            raise UsageError("Unknown model kind: {!r}".format(self.kind))
        if self.weak_policy not in WEAK_POLICIES:
            raise UsageError("Unknown weak schwa policy: {!r}"
                             .format(self.weak_policy))
        if self.seed < 0:
            raise UsageError("Seed must be nonnegative: {}".format(self.seed))

    def items(self):
        """``(key, value)`` pairs of the reproducibility header."""
        yield 'version', __version__
        yield 'command', self.command
        yield 'inputs', ' '.join(self.inputs)
        yield 'output', self.output or '-'
        yield 'seed', self.seed
        yield 'weak_policy', self.weak_policy
        if self.kind is not None:
            yield 'model', self.kind
        for prefix, obj in (('features', self.features),
                            ('hyper', self.hyper),
                            ('split', self.split)):
            if obj is not None:
                for key, value in asdict(obj).items():
                    yield '{}.{}'.format(prefix, key), value
        yield from sorted(self.options.items())

    def header(self) -> str:
        return ''.join('# {} = {}\n'.format(k, v) for k, v in self.items())


def _env_seed():
    value = os.environ.get('SCHWA_SEED') or '0'
    try:
        return int(value)
    except ValueError:
        raise UsageError("SCHWA_SEED is not an integer: {!r}"
                         .format(value)) from None


def option(parser, name, descr, default=False):
    """Add a negatable option to parser."""
    dest = name.replace('-', '_')
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        '--' + name, dest=dest, default=default,
        action='store_true', help=descr.format(NOT=''))
    group.add_argument(
        '--no-' + name, dest=dest,
        action='store_false', help=descr.format(NOT='not '))
    return group


#----------------------------------------
# Argument parsing
#----------------------------------------

def _add_seed(parser):
    parser.add_argument(
        '--seed', type=int, default=None,
        help='random seed (default: $SCHWA_SEED or 0)')


def _add_weak_policy(parser):
    parser.add_argument(
        '--weak-policy', choices=WEAK_POLICIES, default='retain',
        help='label of weakened schwas: retain, delete or drop them')


def _add_format(parser):
    parser.add_argument(
        '--format', choices=('table', 'kv'), default='table',
        help='human readable table or machine readable key=value lines')


def _add_split(parser):
    parser.add_argument('--train-fraction', type=float, default=0.8)
    parser.add_argument('--dev-fraction', type=float, default=0.1)
    parser.add_argument('--test-fraction', type=float, default=0.1)


def _add_features(parser):
    parser.add_argument(
        '--window', type=int, default=5,
        help='context positions on each side of the schwa')
    parser.add_argument('--left', type=int, help='override left window')
    parser.add_argument('--right', type=int, help='override right window')
    option(parser, 'phon-features',
           'do {NOT}add phonological feature values of context phones')


def _add_hyper(parser):
    group = parser.add_argument_group('hyperparameters')
    group.add_argument('--rounds', type=int, help='gbdt: boosting rounds')
    group.add_argument('--max-depth', type=int, help='gbdt: tree depth')
    group.add_argument('--shrinkage', type=float, help='gbdt: learning rate')
    group.add_argument('--reg-lambda', type=float, help='gbdt: L2 on leaves')
    group.add_argument('--gamma', type=float, help='gbdt: split penalty')
    group.add_argument('--min-child-hessian', type=float,
                       help='gbdt: minimum hessian sum per child')
    group.add_argument('--lr', type=float, help='logistic/mlp: learning rate')
    group.add_argument('--epochs', type=int, help='logistic/mlp: epochs')
    group.add_argument('--l2', type=float, help='logistic: L2 penalty')
    group.add_argument('--hidden', type=int, help='mlp: hidden units')
    group.add_argument('--alpha', type=float, help='mlp: L2 penalty')
    group.add_argument('--batch-size', type=int, help='mlp: minibatch size')
    group.add_argument('--patience', type=int,
                       help='mlp: epochs without dev improvement')
    group.add_argument('--tol', type=float,
                       help='mlp: minimum dev loss improvement')


def make_parser():
    parser = ArgumentParser(
        prog='pyschwa',
        description='Schwa deletion for Hindi and Punjabi.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log progress (-vv for debug output)')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    p = commands.add_parser('transcribe', help='decode text to tokens')
    p.add_argument('text', nargs='*', help='words to decode')
    p.add_argument('--file', help='read text from file')
    p.add_argument('--script', choices=SCRIPTS, default='devanagari')
    p.set_defaults(func=cmd_transcribe)

    p = commands.add_parser('build-dataset',
                            help='align a lexicon into schwa instances')
    p.add_argument('lexicon', nargs='+')
    p.add_argument('-o', '--output', required=True,
                   help='instances file to write')
    _add_weak_policy(p)
    p.set_defaults(func=cmd_build_dataset)

    p = commands.add_parser('stats', help='lexicon statistics')
    p.add_argument('lexicon', nargs='+')
    _add_weak_policy(p)
    _add_format(p)
    p.set_defaults(func=cmd_stats)

    p = commands.add_parser('train', help='train a schwa classifier')
    p.add_argument('lexicon', nargs='+')
    p.add_argument('-o', '--output', required=True, help='model file')
    p.add_argument('-m', '--model', dest='kind', choices=sorted(HYPERS),
                   default='gbdt')
    p.add_argument('--instances',
                   help='instances file written by build-dataset')
    p.add_argument('-j', '--jobs', type=int, default=1,
                   help='threads for gbdt split search')
    _add_features(p)
    _add_hyper(p)
    _add_split(p)
    _add_seed(p)
    _add_weak_policy(p)
    p.set_defaults(func=cmd_train)

    p = commands.add_parser('evaluate', help='score models on a lexicon')
    p.add_argument('lexicon', nargs='+')
    p.add_argument('-m', '--model', dest='models', action='append',
                   default=[], help='model file (repeatable)')
    p.add_argument('--baseline', action='store_true',
                   help='also score the rule baseline')
    p.add_argument('--rules', help='rule file for the baseline')
    p.add_argument('--instances',
                   help='instances file written by build-dataset')
    p.add_argument('--split', choices=SPLITS, default='test',
                   help='part of the lexicon to score')
    p.add_argument('--errors', type=int, default=0, metavar='K',
                   help='list up to K misclassified words per model')
    _add_split(p)
    _add_seed(p)
    _add_weak_policy(p)
    _add_format(p)
    p.set_defaults(func=cmd_evaluate)

    p = commands.add_parser('predict', help='transcribe words')
    p.add_argument('words', nargs='*')
    p.add_argument('-m', '--model', help='model file')
    p.add_argument('--rules', help='use a rule file instead of a model')
    p.add_argument('--file', help='read words from file')
    p.add_argument('--script', choices=SCRIPTS, default='devanagari')
    p.add_argument('-j', '--jobs', type=int, default=1)
    p.set_defaults(func=cmd_predict)

    p = commands.add_parser('dump-trees', help='print boosted trees as rules')
    p.add_argument('model')
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_dump_trees)

    p = commands.add_parser('synthesize', help='write a rule-labeled lexicon')
    p.add_argument('-n', '--words', dest='n_words', type=int, default=2000)
    p.add_argument('--max-aksharas', type=int, default=4)
    p.add_argument('--rules', help='rule file used for labeling')
    p.add_argument('-o', '--output')
    _add_seed(p)
    p.set_defaults(func=cmd_synthesize)

    p = commands.add_parser('grid', help='grid over window sizes and features')
    p.add_argument('lexicon', nargs='+')
    p.add_argument('-m', '--model', dest='kind', choices=sorted(HYPERS),
                   default='gbdt')
    p.add_argument('--windows', default='3,4,5',
                   help='comma separated window sizes')
    p.add_argument('-j', '--jobs', type=int, default=1)
    _add_hyper(p)
    _add_split(p)
    _add_seed(p)
    _add_weak_policy(p)
    _add_format(p)
    p.set_defaults(func=cmd_grid)

    return parser


#----------------------------------------
# Configuration
#----------------------------------------

def _hyper(kind, args, seed):
    cls = HYPERS[kind]
    values = {f.name: getattr(args, f.name) for f in fields(cls)
              if getattr(args, f.name, None) is not None}
    values['seed'] = seed
    return cls(**values)


def _features(args):
    left = args.window if args.left is None else args.left
    right = args.window if args.right is None else args.right
    return FeatureConfig(left, right, args.phon_features)


def _split(args, seed):
    return SplitSpec(args.train_fraction, args.dev_fraction,
                     args.test_fraction, seed)


_OPTIONS = ('script', 'file', 'model', 'rules', 'baseline', 'split',
            'instances', 'windows', 'jobs', 'errors', 'n_words',
            'max_aksharas')


def make_config(args) -> RunConfig:
    """Validate parsed arguments into a :class:`RunConfig`."""
    seed = getattr(args, 'seed', None)
    if seed is None:
        seed = _env_seed()
    inputs = (getattr(args, 'lexicon', None) or getattr(args, 'words', None) or
              getattr(args, 'text', None) or ())
    kind = getattr(args, 'kind', None)
    config = RunConfig(
        command=args.command,
        inputs=tuple(str(i) for i in inputs),
        output=getattr(args, 'output', None),
        kind=kind,
        seed=seed,
        weak_policy=getattr(args, 'weak_policy', 'retain'))
    if kind is not None:
        config.hyper = _hyper(kind, args, seed)
    if hasattr(args, 'window'):
        config.features = _features(args)
    if hasattr(args, 'train_fraction'):
        config.split = _split(args, seed)
    for name in _OPTIONS:
        value = getattr(args, name, None)
        if value is not None and value is not False:
            config.options[name] = value
    if getattr(args, 'models', None):
        config.options['models'] = ' '.join(args.models)
    if getattr(args, 'jobs', 1) < 1:
        raise UsageError("--jobs must be positive")
    return config


#----------------------------------------
# Helpers
#----------------------------------------

def _read_text(path):
    if path is None:
        return sys.stdin.read()
    with open(path, encoding='utf-8') as f:
        return f.read()


def _load_entries(paths):
    entries = []
    for path in paths:
        part, rejects = parse_lexicon(path, first_id=len(entries))
        _warn_rejects(path, rejects)
        entries.extend(part)
    return entries


def _warn_rejects(path, rejects):
    if rejects:
        logger.warning("%s: %d malformed lines skipped",
                       path, len(rejects))


def _load_dataset(paths, config, instances_path=None):
    # splits run over all aligned entries, words without schwas included
    entries = _load_entries(paths)
    dataset, discarded = build_dataset(entries, config.weak_policy)
    logger.info("%d schwas from %d entries, %d entries discarded",
                len(dataset.instances), len(dataset.entries),
                len(discarded))
    if instances_path is None:
        return dataset
    instances = read_instances(instances_path)
    missing = ({i.entry_id for i in instances} -
               {e.id for e in dataset.entries})
    if missing:
        raise UsageError("{}: entry id {} is not an aligned lexicon entry"
                         .format(instances_path, min(missing)))
    return Dataset(dataset.entries, instances)


def _select(dataset, config, which):
    if which == 'all':
        return dataset
    train, dev, test = split_dataset(dataset, config.split)
    return {'train': train, 'dev': dev, 'test': test}[which]


def _write(out, text):
    out.write(text)
    out.flush()


def _stats_table(rows) -> str:
    width = max([len('Dataset')] + [len(name) for name, _ in rows])
    header = '{:<{w}}  {:>8}  {:>8}  {:>8}  {:>9}'.format(
        'Dataset', 'Entries', 'Schwas', 'Deleted', 'Deletion', w=width)
    lines = [header, '-' * len(header)]
    for name, s in rows:
        lines.append('{:<{w}}  {:>8}  {:>8}  {:>8}  {:>9}'.format(
            name, s.entry_count, s.schwa_count, s.deleted_count,
            format_percent(s.deletion_rate), w=width))
    return '\n'.join(lines) + '\n'


def _stats_kv(rows) -> str:
    lines = []
    for name, s in rows:
        for key, value in s._asdict().items():
            lines.append('{}.{}={}'.format(name, key, value))
        rate = s.deletion_rate
        lines.append('{}.deletion_rate={}'.format(
            name, '-' if rate is None else '{:.2f}'.format(100 * rate)))
    return '\n'.join(lines) + '\n'


#----------------------------------------
# Commands
#----------------------------------------

def cmd_transcribe(args, config, out):
    text = ' '.join(args.text) if args.text else _read_text(args.file)
    for word in decode_words(text, args.script):
        out.write(render(word) + '\n')
    return 0


def cmd_build_dataset(args, config, out):
    entries = _load_entries(args.lexicon)
    dataset, discarded = build_dataset(entries, config.weak_policy)
    write_instances(dataset.instances, args.output)
    for entry, failure in discarded:
        out.write('discarded\t{}\t{}\t{}\t{}\t{}\n'.format(
            entry.id, entry.headword, failure.reason,
            failure.orth_index, failure.phon_index))
    out.write('{} instances from {} entries, {} entries discarded\n'.format(
        len(dataset.instances), len(dataset.entries), len(discarded)))
    return 0


def cmd_stats(args, config, out):
    rows = []
    for path in args.lexicon:
        entries, rejects = parse_lexicon(path)
        _warn_rejects(path, rejects)
        rows.append((os.path.basename(path), stats(entries, config.weak_policy)))
    if len(rows) > 1:
        total = rows[0][1]
        for _, s in rows[1:]:
            total = total + s
        rows.append(('total', total))
    fmt = _stats_kv if args.format == 'kv' else _stats_table
    _write(out, fmt(rows))
    return 0


def cmd_train(args, config, out):
    dataset = _load_dataset(args.lexicon, config, args.instances)
    train, dev, _ = split_dataset(dataset, config.split)
    model, report = train_model(config.kind, train, dev, config.features,
                                config.hyper, n_jobs=args.jobs)
    save_model(model, args.output)
    lines = [
        'model {} written to {}'.format(config.kind, args.output),
        'iterations {}'.format(report.iterations),
        'initial loss {:.6f}'.format(report.initial_loss),
    ]
    if report.losses:
        lines.append('final loss {:.6f}'.format(report.losses[-1]))
    out.write('\n'.join(lines) + '\n')
    if dev.instances:
        metrics, _, _ = evaluate_predictor(make_predictor(model), dev)
        _write(out, format_table([('dev', metrics)]))
    return 0


def cmd_evaluate(args, config, out):
    if not args.models and not args.baseline and not args.rules:
        raise UsageError("Nothing to evaluate: pass --model or --baseline")
    dataset = _load_dataset(args.lexicon, config, args.instances)
    dataset = _select(dataset, config, args.split)
    predictors = [
        make_predictor(load_model(path),
                       os.path.splitext(os.path.basename(path))[0])
        for path in args.models
    ]
    if args.baseline or args.rules:
        predictors.append(make_predictor(load_rules(args.rules)))
    rows = []
    reports = []
    for predictor in predictors:
        metrics, weak, predictions = evaluate_predictor(predictor, dataset)
        rows.append((predictor.name, metrics))
        if weak is not None:
            rows.append((predictor.name + '.weak', weak))
        if args.errors:
            reports.append((predictor.name, error_report(
                predictions, dataset.instances, dataset.by_id,
                k=args.errors, seed=config.seed)))
    if args.format == 'kv':
        _write(out, format_kv(rows))
        return 0
    _write(out, format_table(rows))
    for name, report in reports:
        out.write('\n# {}: {} misclassified words\n'.format(name, report.total))
        out.write(report.render())
    return 0


def cmd_predict(args, config, out):
    if (args.model is None) == (args.rules is None):
        raise UsageError("Pass exactly one of --model and --rules")
    if args.model is not None:
        predictor = make_predictor(load_model(args.model))
    else:
        predictor = make_predictor(load_rules(args.rules))
    if args.words:
        lines = args.words
    else:
        lines = _read_text(args.file).splitlines()
    words = [w for line in lines for w in decode_words(line, args.script)]
    def run(orth):
        return render(transcribe(predictor, orth))
    if args.jobs > 1:
        with ThreadPool(args.jobs) as pool:
            results = pool.map(run, words)
    else:
        results = [run(w) for w in words]
    for line in results:
        out.write(line + '\n')
    return 0


def cmd_dump_trees(args, config, out):
    model = load_model(args.model)
    if not isinstance(model, GbdtModel):
        raise UsageError("{} holds a {} model; only gbdt models consist of "
                         "trees".format(args.model, model.kind))
    text = dump_trees(model, make_predictor(model).encoder.names())
    if args.output:
        with open(args.output, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    else:
        _write(out, text)
    return 0


def cmd_synthesize(args, config, out):
    if args.n_words < 0:
        raise UsageError("--words must be nonnegative")
    ruleset = load_rules(args.rules)
    entries = generate_corpus(args.n_words, config.seed, ruleset,
                              args.max_aksharas)
    if args.output:
        write_lexicon(entries, args.output)
    else:
        _write(out, format_lexicon(entries))
    return 0


def cmd_grid(args, config, out):
    try:
        windows = tuple(int(w) for w in args.windows.split(','))
    except ValueError:
        raise UsageError("Bad --windows value: {!r}"
                         .format(args.windows)) from None
    dataset = _load_dataset(args.lexicon, config)
    train, dev, _ = split_dataset(dataset, config.split)
    results = grid_search(config.kind, train, dev, windows, (False, True),
                          config.hyper, n_jobs=args.jobs)
    rows = [
        ('window={}{}'.format(c.left, '+phon' if c.phon_features else ''), m)
        for c, m in results
    ]
    _write(out, (format_kv if args.format == 'kv' else format_table)(rows))
    return 0


#----------------------------------------
# Entry point
#----------------------------------------

_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _error(message):
    sys.stderr.write('pyschwa: error: {}\n'.format(message))


def main(argv=None, out=None) -> int:
    """Run the command line interface; returns the exit code."""
    args = make_parser().parse_args(argv)
    out = out or sys.stdout
    logging.basicConfig(
        level=_LOG_LEVELS[min(args.verbose, len(_LOG_LEVELS) - 1)],
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr)
    try:
        config = make_config(args)
        sys.stderr.write(config.header())
        return args.func(args, config, out)
    except TrainingDiverged as e:
        _error(e)
        return 3
    except (OSError, ValueError, FeatureIndexError) as e:
        _error(e)
        return 2


def main_exit():
    sys.exit(main())
