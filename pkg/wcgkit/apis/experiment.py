import hashlib
import logging
import os.path as osp
import re

import mmcv
import numpy as np
import pandas as pd
from mmcv import Config

from wcgkit.core import (EstimationHook, LocalPolicy, QLearnerHook, QTable,
                         RandomizedPolicy, RewardSpec, ScenarioError,
                         Simulator, WcgInstance, build_lp, ds_indices,
                         ergodic_local_policy, exceedance_rate,
                         exceedance_slope, expected_occupancy,
                         initial_marginal, initial_states,
                         occupancy_deviation, ranking_agreement,
                         relative_gap, solve_lp, taboo_linear_solve,
                         validate_instance)
from wcgkit.instances import build_instance
from wcgkit.policies import POLICIES, build_policy
from wcgkit.version import __version__

logger = logging.getLogger(__name__)

METRICS = ('reward', 'deviation_inf', 'deviation_l2', 'kernel_error',
           'q_error', 'lp_gap', 'ranking_agreement', 'alpha_deviation',
           'stop_time', 'swaps')
RECORD_COLUMNS = [
    'scenario', 'scenario_hash', 'version', 'h', 'T', 'seed', 't', 'metric',
    'value'
]
REQUIRED_KEYS = ('instance', 'policy', 'sweep')
SWEEP_GRIDS = ('scales', 'horizons', 'seeds')
# reference runs draw from seeds no sweep grid reaches
REFERENCE_SEED_BASE = 10**6

_lp_bounds = dict()
_offline_indices = dict()
_reference_paths = dict()


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, range)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def _key_line(lines, key):
    pattern = re.compile(r'^{}\s*='.format(re.escape(key)))
    for lineno, line in enumerate(lines, start=1):
        if pattern.match(line):
            return lineno
    return 1


def _with_horizon(inst, horizon):
    return WcgInstance(
        inst.classes,
        inst.base_counts,
        constraints=inst.constraints,
        scale=inst.scale,
        horizon=horizon,
        discount=inst.discount)


class Scenario(object):
    """A sweep of replications over scales h, horizons T and seeds.

    Scenario files are Python configs with the top-level keys ``instance``
    (instance file or generator config), ``policy`` (primary policy
    config), ``sweep`` (``scales``, ``horizons``, ``seeds``; an integer
    ``seeds`` means ``range(seeds)``) and optionally ``metrics``,
    ``strict``, ``learner``, ``reference``, ``max_steps``, ``eps`` and
    ``work_dir``.

    Args:
        cfg (dict): Plain scenario dict.
        filename (str, optional): Source file, used in diagnostics.
        digest (str, optional): Content hash, derived from ``cfg`` when
            omitted.
    """

    def __init__(self, cfg, filename=None, digest=None):
        self.cfg = _plain(dict(cfg))
        self.filename = filename
        if digest is None:
            digest = hashlib.sha1(
                mmcv.dump(self.cfg, file_format='json',
                          sort_keys=True).encode('utf-8')).hexdigest()
        self.hash = digest[:12]
        default_name = 'scenario' if filename is None else osp.splitext(
            osp.basename(filename))[0]
        self.name = self.cfg.get('name', default_name)

    def __repr__(self):
        return '{}(name={}, hash={})'.format(self.__class__.__name__,
                                             self.name, self.hash)

    @classmethod
    def fromfile(cls, filename):
        """Load and validate a scenario file.

        Raises:
            ScenarioError: With ``file:line`` diagnostics.
        """
        if not osp.isfile(filename):
            raise ScenarioError(
                'scenario file {} does not exist'.format(filename),
                ['{}:0: file not found'.format(filename)])
        with open(filename, 'rb') as f:
            content = f.read()
        try:
            cfg = Config.fromfile(filename)
        except SyntaxError as err:
            raise ScenarioError(
                'cannot parse {}'.format(filename),
                ['{}:{}: {}'.format(filename, err.lineno or 1, err.msg)])
        except Exception as err:
            raise ScenarioError(
                'cannot load {}'.format(filename),
                ['{}:1: {}'.format(filename, err)])
        scenario = cls({key: cfg[key]
                        for key in cfg},
                       filename=filename,
                       digest=hashlib.sha1(content).hexdigest())
        scenario.validate(content.decode('utf-8').splitlines())
        return scenario

    @classmethod
    def from_dict(cls, cfg, name=None):
        cfg = dict(cfg)
        if name is not None:
            cfg['name'] = name
        scenario = cls(cfg)
        scenario.validate()
        return scenario

    @property
    def instance_cfg(self):
        cfg = self.cfg['instance']
        if mmcv.is_str(cfg) and not osp.isfile(cfg) and self.filename:
            local = osp.join(osp.dirname(self.filename), cfg)
            if osp.isfile(local):
                return local
        return cfg

    @property
    def policy_cfg(self):
        return dict(self.cfg['policy'])

    def grid(self, name):
        values = self.cfg['sweep'].get(name)
        if name == 'seeds' and isinstance(values, int):
            return list(range(values))
        return list(values or [])

    @property
    def scales(self):
        return self.grid('scales')

    @property
    def horizons(self):
        return self.grid('horizons')

    @property
    def seeds(self):
        return self.grid('seeds')

    @property
    def metrics(self):
        return list(self.cfg.get('metrics', ['reward']))

    @property
    def strict(self):
        return bool(self.cfg.get('strict', True))

    @property
    def work_dir(self):
        return self.cfg.get('work_dir', osp.join('./work_dirs', self.name))

    @property
    def reference(self):
        reference = dict(factor=10, replications=200)
        reference.update(self.cfg.get('reference', dict()))
        return reference

    def validate(self, lines=None):
        """Collect every problem of the scenario, raise if there is one."""
        lines = lines or []
        filename = self.filename or '<scenario>'
        diagnostics = []

        def report(key, message):
            diagnostics.append('{}:{}: {}: {}'.format(
                filename, _key_line(lines, key), key, message))

        for key in REQUIRED_KEYS:
            if key not in self.cfg:
                diagnostics.append('{}:1: missing top-level key "{}"'.format(
                    filename, key))
        if 'sweep' in self.cfg:
            if not isinstance(self.cfg['sweep'], dict):
                report('sweep', 'must be a dict')
            else:
                for name in SWEEP_GRIDS:
                    values = self.grid(name)
                    low = 1 if name == 'scales' else 0
                    if not values:
                        report('sweep', 'grid "{}" is empty'.format(name))
                    elif any(not isinstance(v, int) or v < low
                             for v in values):
                        report(
                            'sweep', 'grid "{}" needs integers >= {}'.format(
                                name, low))
        if 'policy' in self.cfg:
            policy = self.cfg['policy']
            if not (isinstance(policy, dict) and 'type' in policy):
                report('policy', 'must be a dict with a "type" key')
            elif policy['type'] not in POLICIES:
                report('policy',
                       'unknown policy type "{}"'.format(policy['type']))
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            report('metrics', 'unknown metrics {}'.format(unknown))
        if 'instance' in self.cfg:
            try:
                inst = build_instance(self.instance_cfg)
            except (IOError, ValueError, KeyError, TypeError) as err:
                report('instance', 'cannot build instance: {}'.format(err))
            else:
                for code, message in validate_instance(inst):
                    report('instance', '[{}] {}'.format(code, message))
        if diagnostics:
            raise ScenarioError(
                'scenario {} is invalid'.format(self.name), diagnostics)
        return self

    def build_instance(self, h, horizon):
        return _with_horizon(build_instance(self.instance_cfg, scale=h),
                             horizon)


class MetricFrame(object):
    """Long-format metric records of a sweep and their aggregates."""

    def __init__(self, records=None):
        self.frame = pd.DataFrame(records or [], columns=RECORD_COLUMNS)

    def __len__(self):
        return len(self.frame)

    @classmethod
    def from_csv(cls, filename):
        return cls(pd.read_csv(filename).to_dict('records'))

    def values(self, metric, h=None):
        frame = self.frame[self.frame['metric'] == metric]
        if h is not None:
            frame = frame[frame['h'] == h]
        return frame['value'].to_numpy(dtype=np.float64)

    def aggregate(self):
        """count, mean, median and 10/90% quantiles per (h, metric)."""
        rows = []
        for (h, metric), group in self.frame.groupby(['h', 'metric'],
                                                     sort=True):
            values = group['value'].to_numpy(dtype=np.float64)
            values = values[np.isfinite(values)]
            row = dict(h=int(h), metric=metric, count=int(values.size))
            if values.size:
                q10, q90 = np.quantile(values, [0.1, 0.9])
                row.update(
                    mean=float(values.mean()),
                    median=float(np.median(values)),
                    q10=float(q10),
                    q90=float(q90))
            else:
                row.update(mean=np.nan, median=np.nan, q10=np.nan, q90=np.nan)
            rows.append(row)
        return rows

    def to_csv(self, filename):
        self.frame.to_csv(filename, index=False, float_format='%.12g')

    def dump(self, out_dir, prefix='metrics'):
        """Write ``<prefix>.csv`` and ``<prefix>_aggregates.json``."""
        mmcv.mkdir_or_exist(out_dir)
        csv_file = osp.join(out_dir, '{}.csv'.format(prefix))
        json_file = osp.join(out_dir, '{}_aggregates.json'.format(prefix))
        self.to_csv(csv_file)
        mmcv.dump(self.aggregate(), json_file, indent=2)
        return csv_file, json_file


def build_learner(inst, cfg=None):
    """Q-learning hook for one secondary policy with exact-value oracle."""
    cfg = dict(cfg or dict())
    labels = cfg.get('labels')
    if labels is None:
        labels = [ergodic_local_policy(c) for c in inst.classes]
        if any(v is None for v in labels):
            raise ValueError('no ergodic secondary policy to learn')
    policy = LocalPolicy(labels)
    policy.check(inst)
    qtable = QTable.zeros(
        inst, [policy], [RewardSpec.live()], step_size=cfg.get('step_size'))
    oracle = [[
        taboo_linear_solve(c, policy[i], c.rewards)
        for i, c in enumerate(inst.classes)
    ]]
    return QLearnerHook(qtable, oracle=oracle)


def _run(scenario, inst, policy, seed, horizon, hooks=None):
    simulator = Simulator(
        inst, policy, seed=seed, hooks=hooks, strict=scenario.strict)
    if hasattr(policy, 'done'):
        simulator.run(
            scenario.cfg.get('max_steps', 100000),
            until=lambda sim: policy.done)
    else:
        simulator.run(horizon + 1)
    return simulator


def _lp_bound(scenario, inst, horizon):
    key = (scenario.hash, inst.scale, horizon)
    if key not in _lp_bounds:
        x0 = initial_marginal(inst, states=initial_states(inst))
        solution = solve_lp(build_lp(inst, x0, horizon,
                                     initial='state')).check()
        _lp_bounds[key] = float(solution.objective)
    return _lp_bounds[key]


def _offline_matrices(scenario, inst):
    if scenario.hash not in _offline_indices:
        _offline_indices[scenario.hash] = [
            t.index_matrix() for t in ds_indices(inst)
        ]
    return _offline_indices[scenario.hash]


def run_replication(scenario, h, horizon, seed, mean_path=None):
    """Simulate one sweep cell and return its metric records."""
    inst = scenario.build_instance(h, horizon)
    policy = build_policy(scenario.policy_cfg)
    metrics = scenario.metrics
    hooks, learner, estimator = [], None, None
    learner_cfg = dict(scenario.cfg.get('learner', dict()))
    if 'q_error' in metrics:
        learner = build_learner(inst, learner_cfg)
        hooks.append(learner)
    if learner_cfg.get('stimulate') or 'kernel_error' in metrics:
        estimator = EstimationHook(
            learner=learner if learner_cfg.get('stimulate') else None)
        hooks.append(estimator)
    simulator = _run(scenario, inst, policy, seed, horizon, hooks)
    trajectory = simulator.trajectory
    summary = policy.summary()

    values = dict(summary)
    values['reward'] = summary.get('realized', trajectory.normalized_reward)
    if mean_path is not None:
        occupancy = trajectory.occupancy_array()
        values['deviation_inf'] = occupancy_deviation(occupancy, mean_path)
        values['deviation_l2'] = occupancy_deviation(
            occupancy, mean_path, order=2)
    if learner is not None:
        values['q_error'] = learner.q_error()
    if 'kernel_error' not in values and estimator is not None:
        values['kernel_error'] = (
            estimator.est.kernel_error() if estimator.est.frozen else np.nan)
        if estimator.est.frozen:
            values.setdefault('stop_time', float(estimator.est.stop_time))
    if 'lp_gap' in metrics and 'lp_gap' not in values:
        bound = summary.get('lp_bound')
        if bound is None:
            bound = _lp_bound(scenario, inst, horizon)
        values['lp_gap'] = relative_gap(bound, values['reward'])
    if 'ranking_agreement' in metrics and hasattr(policy, 'index_matrices'):
        values['ranking_agreement'] = ranking_agreement(
            policy.index_matrices(), _offline_matrices(scenario, inst))

    records = []
    for metric in metrics:
        if metric not in values:
            logger.debug('metric %s does not apply to %s', metric,
                         scenario.policy_cfg['type'])
            continue
        records.append(
            dict(
                scenario=scenario.name,
                scenario_hash=scenario.hash,
                version=__version__,
                h=int(h),
                T=int(horizon),
                seed=int(seed),
                t=int(simulator.t),
                metric=metric,
                value=float(values[metric])))
    return records


def _randomized_policy(policy, simulator):
    randomized = getattr(policy, 'policy', None)
    if isinstance(randomized, LocalPolicy):
        return RandomizedPolicy.from_local(randomized, simulator.sa_index)
    if isinstance(randomized, RandomizedPolicy):
        return randomized
    return None


def _average_paths(paths):
    steps = min(p.shape[0] for p in paths)
    return np.mean([p[:steps] for p in paths], axis=0)


def _reference_task(task):
    scenario, h, horizon, seed = task
    inst = scenario.build_instance(h, horizon)
    simulator = _run(scenario, inst, build_policy(scenario.policy_cfg), seed,
                     horizon)
    return simulator.trajectory.occupancy_array()


def _map(func, tasks, nproc=1):
    if not tasks:
        return []
    if nproc > 1:
        return mmcv.track_parallel_progress(func, tasks, nproc)
    return mmcv.track_progress(func, tasks)


def mean_occupancy_path(scenario, h, horizon, nproc=1):
    """Mean trajectory z(t) the deviation metrics compare against.

    Randomized, local and LP-derived policies have the closed-form mean
    path of :func:`expected_occupancy`. For history-dependent policies the
    path is the average of ``reference.replications`` runs at scale
    ``reference.factor`` times the largest swept h.
    """
    inst = scenario.build_instance(h, horizon)
    policy = build_policy(scenario.policy_cfg)
    simulator = Simulator(inst, policy, seed=0, strict=scenario.strict)
    policy.reset(simulator)
    randomized = _randomized_policy(policy, simulator)
    if randomized is not None:
        sa_index = simulator.sa_index
        groups = sa_index.group_offsets[inst.arm_class] + simulator.state.states
        marginal = np.bincount(
            groups, minlength=sa_index.num_groups) / float(inst.total_arms)
        z0 = marginal[sa_index.group_of] * randomized.at(0)
        return expected_occupancy(inst, randomized, z0, horizon + 1,
                                  sa_index)
    key = (scenario.hash, horizon)
    if key not in _reference_paths:
        reference = scenario.reference
        h_ref = int(reference['factor']) * max(scenario.scales)
        logger.info('reference simulation at h=%d over %d replications',
                    h_ref, reference['replications'])
        tasks = [(scenario, h_ref, horizon, REFERENCE_SEED_BASE + r)
                 for r in range(int(reference['replications']))]
        _reference_paths[key] = _average_paths(
            _map(_reference_task, tasks, nproc))
    return _reference_paths[key]


def _cell_task(task):
    scenario, h, horizon, seed, mean_path = task
    return run_replication(scenario, h, horizon, seed, mean_path=mean_path)


def run_scenario(scenario, seeds=None, nproc=1):
    """Run every (h, T, seed) cell of a scenario.

    Args:
        scenario (str | :obj:`Scenario`): Scenario file or loaded scenario.
        seeds (list[int], optional): Seeds replacing the sweep grid's.
        nproc (int): Worker processes; results do not depend on it.

    Returns:
        :obj:`MetricFrame`
    """
    if mmcv.is_str(scenario):
        scenario = Scenario.fromfile(scenario)
    seeds = scenario.seeds if seeds is None else list(seeds)
    needs_path = any(m.startswith('deviation') for m in scenario.metrics)
    tasks = []
    for horizon in scenario.horizons:
        for h in scenario.scales:
            mean_path = None
            if needs_path:
                mean_path = mean_occupancy_path(scenario, h, horizon, nproc)
            tasks.extend(
                (scenario, h, horizon, seed, mean_path) for seed in seeds)
    logger.info('%s: %d cells (scenario hash %s, version %s)', scenario.name,
                len(tasks), scenario.hash, __version__)
    records = []
    for cell in _map(_cell_task, tasks, nproc):
        records.extend(cell)
    return MetricFrame(records)


def run_convergence_study(instance,
                          policy,
                          scales,
                          eps,
                          seeds,
                          horizon,
                          nproc=1,
                          reference=None):
    """Exceedance rates P{max_t ||Z - z||_inf > eps} per scale h.

    Args:
        instance (str | dict | :obj:`WcgInstance`): Instance or its config.
        policy (dict): Primary policy config.
        scales (list[int]): h grid.
        eps (float): Deviation threshold.
        seeds (list[int] | int): Replication seeds.
        horizon (int): Finite T.

    Returns:
        tuple: (DataFrame with columns h, exceedance, mean_deviation,
        max_deviation; slope of log exceedance against h)
    """
    if horizon is None:
        raise ValueError('a convergence study needs a finite horizon')
    if isinstance(instance, WcgInstance):
        instance = instance.to_dict()
    cfg = dict(
        name='convergence',
        instance=instance,
        policy=dict(policy),
        sweep=dict(scales=list(scales), horizons=[horizon], seeds=seeds),
        metrics=['deviation_inf'],
        strict=False)
    if reference is not None:
        cfg['reference'] = dict(reference)
    scenario = Scenario.from_dict(cfg)
    frame = run_scenario(scenario, nproc=nproc)
    rows = []
    for h in scenario.scales:
        deviations = frame.values('deviation_inf', h=h)
        rows.append(
            dict(
                h=h,
                exceedance=exceedance_rate(deviations, eps),
                mean_deviation=float(deviations.mean()),
                max_deviation=float(deviations.max())))
    rates = pd.DataFrame(rows, columns=['h', 'exceedance', 'mean_deviation',
                                        'max_deviation'])
    slope = exceedance_slope(
        rates['h'].to_numpy(),
        rates['exceedance'].to_numpy(),
        floor=0.5 / len(scenario.seeds))
    logger.info('exceedance slope in h: %.4g', slope)
    return rates, slope
