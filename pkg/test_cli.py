import json

import pytest

from qaff import create_app
from qaff.models.cartan import cartan_from_label
from qaff.models.quiver import KRIndex
from qaff.models.quivrep import builtin_K
from qaff.utils.cache import load_table


def run_json(runner, *args):
    result = runner.invoke(args=list(args) + ['--format', 'json'])
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


class TestInfo:
    def test_a3(self, runner):
        data = run_json(runner, 'info', 'A3', '1', '--anchor', '(2,-1)')
        assert len(data['quiver']['vertices']) == 6
        assert len(data['labels']) == 6
        assert sum(1 for row in data['labels'] if row['frozen']) == 3
        assert data['params']['ell'] == 1

    def test_g2_preset(self, runner):
        data = run_json(runner, 'info', '--preset', 'paper-G2-l3')
        assert len(data['quiver']['vertices']) == 8
        assert len(data['quiver']['frozen']) == 4
        assert data['cartan']['d'] == [3, 1]

    def test_text_layout(self, runner):
        result = runner.invoke(args=['info', 'A3', '1', '--anchor', '(2,-1)'])
        assert result.exit_code == 0
        assert 'z(2,-3) -> W^(2)_{2,q^-2} (frozen)' in result.output

    @pytest.mark.parametrize('args', [
        ['info', 'X9', '1'],
        ['info', 'A3'],
        ['info', 'A3', '1', '--anchor', '2,-1'],
        ['info', 'A3', '1', '--anchor', '(5,-1)'],
        ['info', '--preset', 'paper-Z9'],
    ])
    def test_config_errors(self, runner, args):
        result = runner.invoke(args=args)
        assert result.exit_code == 2
        assert 'Error:' in result.output


class TestMutate:
    def test_fig7_sequence(self, runner):
        result = runner.invoke(args=[
            'mutate', 'A3', '1', '--anchor', '(2,-1)',
            '--seq', '(3,-2),(2,-1),(1,-2)', '--compare', 'paper-B2-l2',
        ])
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)
        assert data['isomorphic_to'] == {'preset': 'paper-B2-l2', 'result': True}
        assert len(data['sequence']) == 3

    def test_frozen_vertex(self, runner):
        result = runner.invoke(args=['mutate', '--preset', 'paper-A3-l1', '--seq', '(2,-3)'])
        assert result.exit_code == 1

    def test_bad_sequence(self, runner):
        result = runner.invoke(args=['mutate', '--preset', 'paper-A3-l1', '--seq', '(2,-1) and more'])
        assert result.exit_code == 2


class TestEnumerate:
    def test_a3_closure(self, runner):
        data = run_json(runner, 'enumerate', '--preset', 'paper-A3-l1')
        assert data['mutable_variables'] == 9
        assert data['frozen_variables'] == 3
        assert data['seed_count'] == 14
        assert data['exchange_edges'] == 21
        assert data['closed'] is True

    def test_cap(self, runner):
        result = runner.invoke(args=['enumerate', '--preset', 'paper-A3-l1', '--max-seeds', '3'])
        assert result.exit_code == 0
        assert 'seeds: 3 (stopped at cap 3)' in result.output

    def test_dump_with_loop_weights(self, runner):
        data = run_json(runner, 'enumerate', '--preset', 'paper-A2-l1', '--dump')
        assert len(data['variables']) == 7
        assert all('highest_loop_weight' in row for row in data['variables'])
        assert all(len(row['d_vector']) == 2 for row in data['variables'])


class TestQchar:
    def test_a1(self, runner):
        data = run_json(runner, 'qchar', 'A1', '--i', '1', '--k', '2')
        assert data['text'] == 'Y[1,0]*Y[1,2] + Y[1,0]*Y[1,4]^-1 + Y[1,2]^-1*Y[1,4]^-1'
        assert data['terms'] == 3
        assert data['dimension'] == 3
        assert data['character'] == {'-2': 1, '0': 1, '2': 1}

    def test_cache_file(self, runner, tmp_path):
        path = tmp_path / 'kr.json'
        first = run_json(runner, 'qchar', 'A2', '--i', '1', '--k', '2', '--cache', str(path))
        assert path.exists()
        assert ('A2', KRIndex(1, 2, 0)) in load_table(str(path))
        second = run_json(runner, 'qchar', 'A2', '--i', '1', '--k', '2', '--cache', str(path))
        assert first == second

    def test_fundamentals_file(self, runner, tmp_path):
        path = tmp_path / 'a1.json'
        path.write_text(json.dumps({'type': 'A1', 'fundamentals': {'1': 'Y[1,0] + Y[1,2]^-1'}}))
        data = run_json(runner, 'qchar', 'A1', '--i', '1', '--k', '3', '--fundamentals', str(path))
        assert data['dimension'] == 4

    def test_errors(self, runner, tmp_path):
        assert runner.invoke(args=['qchar', 'A3', '--i', '1', '--k', '1']).exit_code == 1
        assert runner.invoke(args=['qchar', 'A2', '--i', '3', '--k', '1']).exit_code == 2
        missing = str(tmp_path / 'missing.json')
        assert runner.invoke(args=['qchar', 'A1', '--i', '1', '--k', '1', '--fundamentals', missing]).exit_code == 2

    def test_tsys_verify(self, runner):
        result = runner.invoke(args=['tsys-verify', 'A2', '--kmax', '2', '--window', '4'])
        assert result.exit_code == 0, result.output
        assert 'PASS i=2 k=2' in result.output
        assert 'FAIL' not in result.output

    def test_fpoly_builtin(self, runner):
        data = run_json(runner, 'fpoly', '--type', 'A2', '--builtin', '1,2', '--qchar')
        assert data['vertex'] == [1, 2]
        assert data['dimension'] == 3
        assert len(data['f_polynomial']) == 3
        plain = run_json(runner, 'fpoly', '--type', 'A2', '--builtin', '(1,2)')
        assert 'qchar' not in plain
        assert plain['f_polynomial'] == data['f_polynomial']

    def test_fpoly_module_file(self, runner, tmp_path):
        path = tmp_path / 'k2.json'
        path.write_text(json.dumps(builtin_K(cartan_from_label('B2'), 2, 0).to_dict()))
        data = run_json(runner, 'fpoly', '--type', 'B2', '--module', str(path), '--qchar')
        assert data['vertex'] == [2, 0]
        assert data == run_json(runner, 'fpoly', '--type', 'B2', '--builtin', '2,0', '--qchar')
        assert data['dimension'] == 4

    @pytest.mark.parametrize('args', [
        ['fpoly', '--type', 'A2'],
        ['fpoly', '--type', 'A2', '--builtin', '3,0'],
        ['fpoly', '--type', 'A2', '--builtin', 'x'],
        ['fpoly', '--type', 'A2', '--builtin', '1,0', '--at', '(1,0)'],
    ])
    def test_fpoly_bad_options(self, runner, args):
        assert runner.invoke(args=args).exit_code == 2

    def test_fpoly_bad_module(self, runner, tmp_path):
        path = tmp_path / 'rep.json'
        path.write_text(json.dumps({'support': [[1, 0]], 'arrows': [{'from': [1, 0], 'to': [1, 4]}]}))
        result = runner.invoke(args=['fpoly', '--type', 'A2', '--module', str(path)])
        assert result.exit_code == 2
        result = runner.invoke(args=['fpoly', '--type', 'A2', '--module', str(path), '--builtin', '1,0'])
        assert result.exit_code == 2

    def test_fpoly_needs_attachment(self, runner, tmp_path):
        path = tmp_path / 'two.json'
        path.write_text(json.dumps({'support': [[1, 0], [1, 4]], 'arrows': []}))
        assert runner.invoke(args=['fpoly', '--type', 'A1', '--module', str(path)]).exit_code == 2
        data = run_json(runner, 'fpoly', '--type', 'A1', '--module', str(path), '--at', '(1,0)')
        assert data['vertex'] == [1, 0]
        assert len(data['f_polynomial']) == 4


class TestSl2:
    def test_decompose(self, runner):
        result = runner.invoke(args=['sl2', 'decompose', '--strings', '(0,5);(6,6)', '--check'])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output) == [
            {'class': [[0, 2], [12, 3]], 'mult': 1},
            {'class': [[0, 9], [6, 2]], 'mult': 1},
        ]

    @pytest.mark.parametrize('text', ['(0,0)', '0,5', '(0,5);x'])
    def test_bad_strings(self, runner, text):
        result = runner.invoke(args=['sl2', 'decompose', '--strings', text])
        assert result.exit_code == 2


class TestVerify:
    def test_cluster_a3(self, runner):
        result = runner.invoke(args=['verify', '--preset', 'paper-A3-l1', '--suite', 'cluster'])
        assert result.exit_code == 0, result.output
        assert 'PASS closure (9 variables + 3 frozen, 14 seeds)' in result.output
        assert 'SKIP realization' in result.output
        assert result.output.strip().endswith('0 failed')

    def test_cluster_with_realization(self, runner):
        data = run_json(runner, 'verify', '--preset', 'paper-B2-l2', '--suite', 'cluster')
        assert data['failed'] == 0
        names = [check['name'] for check in data['checks']]
        assert 'first mutation at (1,-2) is a T-system value' in names
        assert 'realized variables are q-characters' in names

    def test_geometric(self, runner):
        data = run_json(runner, 'verify', '--type', 'B2', '--suite', 'geometric')
        assert data['failed'] == 0

    def test_tsystem(self, runner):
        result = runner.invoke(args=['verify', '--type', 'B2', '--suite', 'tsystem', '--kmax', '2', '--window', '4'])
        assert result.exit_code == 0, result.output

    def test_tsystem_skips_without_fundamentals(self, runner):
        result = runner.invoke(args=['verify', '--type', 'A3', '--suite', 'tsystem'])
        assert result.exit_code == 0
        assert result.output.startswith('SKIP tsystem')

    def test_sl2(self, runner):
        result = runner.invoke(args=['verify', '--type', 'A1', '--suite', 'sl2'])
        assert result.exit_code == 0, result.output
        assert 'PASS A1 cluster algebra ell=3' in result.output

    def test_unknown_type(self, runner):
        assert runner.invoke(args=['verify', '--type', 'Q2']).exit_code == 2


class TestAppConfig:
    def test_unreadable_fundamentals(self, monkeypatch, tmp_path):
        monkeypatch.setenv('QAFF_FUNDAMENTALS', str(tmp_path / 'nope.json'))
        with pytest.raises(ValueError):
            create_app('production')

    def test_bad_seed_cap(self, monkeypatch):
        monkeypatch.setenv('QAFF_MAX_SEEDS', '0')
        with pytest.raises(ValueError):
            create_app('testing')

    def test_testing_defaults(self, app):
        assert app.config['TESTING']
        assert app.config['QAFF_CACHE'] is None
        assert app.config['QAFF_MAX_SEEDS'] <= 2000
