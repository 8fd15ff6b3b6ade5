import os.path as osp

import mmcv
import pytest

from wcgkit.cli import EXIT_INVALID, EXIT_OK, EXIT_SOLVER, main

CONFIG_DIR = osp.join(osp.dirname(__file__), '..', 'configs')
TWO_STATE = osp.join(CONFIG_DIR, 'instances', 'two_state.json')


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        main(['--version'])
    assert err.value.code == 0
    assert capsys.readouterr().out.startswith('wcg ')


def test_validate_instance_file(capsys):
    assert main(['validate', TWO_STATE]) == EXIT_OK


def test_validate_scenario_files():
    for name in ('mp_index.py', 'convergence_randomized.py', 'ompi.py',
                 'q_learning.py', 'stimulate.py'):
        filename = osp.join(CONFIG_DIR, 'two_state', name)
        assert main(['validate', filename]) == EXIT_OK


def test_invalid_scenario_exit_code(tmp_path, capsys):
    filename = tmp_path / 'bad.py'
    filename.write_text("instance = dict(type='TwoStateInstance')\n"
                        "policy = dict(type='MPIndexPolicy')\n"
                        "sweep = dict(scales=[], horizons=[5], seeds=2)\n")
    assert main(['validate', str(filename)]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert '{}:3: sweep: grid "scales" is empty'.format(filename) in err
    assert main(['run', str(tmp_path / 'absent.py')]) == EXIT_INVALID


def test_indices_command(tmp_path):
    assert main(['indices', TWO_STATE, '--out-dir', str(tmp_path)]) == (
        EXIT_OK)
    tables = mmcv.load(str(tmp_path / 'indices.json'))
    entries = tables[0]['entries']
    assert [e['s'] for e in entries] == [1, 0]
    assert entries[0]['nu'] == pytest.approx(0.372727, abs=1e-6)
    assert tables[0]['pcl']


def test_lp_command(tmp_path):
    assert main(['lp', TWO_STATE, '--horizon', '3', '--out-dir',
                 str(tmp_path)]) == EXIT_OK
    solution = mmcv.load(str(tmp_path / 'solution.json'))
    assert solution['status'] == 'optimal'
    assert (tmp_path / 'problem.lp').read_text().startswith('MAX')
    assert main(['lp', TWO_STATE, '--horizon', '2', '--eps', '0.05']) == (
        EXIT_OK)


def test_lp_command_reports_solver_failures(tmp_path):
    inst = mmcv.load(TWO_STATE)
    # every arm must be active while only half of them may be
    inst['constraints'] = dict(
        functions=[[[[1.0, 0.0], [1.0, 0.0]]], [[[0.0, 1.0], [0.0, 1.0]]]],
        modes=['eq', 'le'],
        offsets=[0.0, 5.0])
    filename = str(tmp_path / 'infeasible.json')
    mmcv.dump(inst, filename)
    assert main(['lp', filename, '--horizon', '2']) == EXIT_SOLVER


def test_run_and_sweep_commands(tmp_path):
    filename = tmp_path / 'tiny.py'
    filename.write_text("instance = dict(type='TwoStateInstance')\n"
                        "policy = dict(type='MPIndexPolicy')\n"
                        "sweep = dict(scales=[1, 2], horizons=[4], "
                        "seeds=[3, 4])\n"
                        "metrics = ['reward', 'lp_gap']\n")
    out_dir = tmp_path / 'out'
    assert main(['run', str(filename), '--out-dir', str(out_dir)]) == EXIT_OK
    frame = mmcv.load(str(out_dir / 'metrics_aggregates.json'))
    assert {row['count'] for row in frame} == {1}
    assert (out_dir / 'run.log').exists()
    assert main(['sweep', str(filename), '--out-dir', str(out_dir),
                 '--seed', '10']) == EXIT_OK
    lines = (out_dir / 'metrics.csv').read_text().splitlines()
    assert lines[0] == 'scenario,scenario_hash,version,h,T,seed,t,metric,value'
    assert len(lines) == 1 + 2 * 2 * 2
    assert {line.split(',')[5] for line in lines[1:]} == {'13', '14'}
