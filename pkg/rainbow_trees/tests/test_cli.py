"""
Test suite for the command-line interface.
Run with: python -m pytest rainbow_trees/tests/test_cli.py -v
"""

import pytest
from click.testing import CliRunner

from rainbow_trees.cli import EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, cli, run_cli
from rainbow_trees.formats import parse_certificate, parse_graph, serialize_graph
from rainbow_trees.graph import EdgeColoredMultigraph


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_graph(tmp_path):
    """Write a graph file and return its path as a string"""

    def write(graph, name="graph.ecg"):
        path = tmp_path / name
        path.write_text(serialize_graph(graph))
        return str(path)

    return write


class TestSolve:
    """Test the solve command"""

    def test_rainbow_k4(self, runner, write_graph, rainbow_k4):
        """Test trees found and exit 0"""
        result = runner.invoke(cli, ["--json", "solve", write_graph(rainbow_k4), "--t", "2"])
        assert result.exit_code == EXIT_OK
        document = parse_certificate(result.output)
        assert document.result == "trees"
        assert len(document.trees) == 2

    def test_rainbow_triangle(self, runner, write_graph, rainbow_triangle):
        """Test a violating partition and exit 2"""
        result = runner.invoke(cli, ["solve", write_graph(rainbow_triangle), "--t", "2"])
        assert result.exit_code == EXIT_NEGATIVE
        assert result.output.splitlines()[0] == "violation"
        assert "partition 0 1 2" in result.output

    def test_timing(self, runner, write_graph, rainbow_k4):
        """Test that --timing adds the wall time"""
        result = runner.invoke(cli, ["--json", "--timing", "solve", write_graph(rainbow_k4), "--t", "1"])
        assert parse_certificate(result.output).stats.wall_ms >= 0


class TestCheck:
    """Test the check command"""

    def test_certificate_is_confirmed(self, runner, write_graph, rainbow_k4, tmp_path):
        """Test that an emitted certificate re-validates"""
        graph = write_graph(rainbow_k4)
        solved = runner.invoke(cli, ["--json", "solve", graph, "--t", "2"])
        certificate = tmp_path / "certificate.json"
        certificate.write_text(solved.output)
        result = runner.invoke(cli, ["check", graph, "--certificate", str(certificate)])
        assert result.exit_code == EXIT_OK
        assert result.output == "valid\n"

    def test_certificate_for_another_graph(self, runner, write_graph, rainbow_k4, mono_k4, tmp_path):
        """Test that trees of one coloring do not validate on another"""
        solved = runner.invoke(cli, ["--json", "solve", write_graph(rainbow_k4), "--t", "1"])
        certificate = tmp_path / "certificate.json"
        certificate.write_text(solved.output)
        result = runner.invoke(cli, ["check", write_graph(mono_k4, "mono.ecg"), "--certificate", str(certificate)])
        assert result.exit_code == EXIT_NEGATIVE

    def test_scan(self, runner, write_graph, mono_k4, rainbow_k4):
        """Test the first violating partition and a clean scan"""
        result = runner.invoke(cli, ["--json", "check", write_graph(mono_k4), "--t", "1"])
        assert result.exit_code == EXIT_NEGATIVE
        assert parse_certificate(result.output).partition.assignment == [0, 0, 1, 2]
        result = runner.invoke(cli, ["check", write_graph(rainbow_k4, "k4.ecg"), "--t", "2"])
        assert result.exit_code == EXIT_OK
        assert result.output == "none\n"

    def test_threads_do_not_change_output(self, runner, write_graph, mono_k4):
        """Test byte-identical JSON across worker counts"""
        graph = write_graph(mono_k4)
        outputs = {
            runner.invoke(cli, ["--json", "--threads", str(threads), "check", graph, "--t", "1"]).output
            for threads in (1, 2)
        }
        assert len(outputs) == 1

    def test_extension_scan(self, runner, write_graph, rainbow_k4, tmp_path):
        """Test scanning against a forest file"""
        forests = tmp_path / "forests.txt"
        forests.write_text("0\n-\n")
        result = runner.invoke(
            cli, ["--json", "check", write_graph(rainbow_k4), "--t", "2", "--mode", "ext", "--forests", str(forests)]
        )
        assert result.exit_code == EXIT_OK
        assert parse_certificate(result.output).mode == "extension"


class TestExtendAndTrees:
    """Test the extend and trees commands"""

    def test_extend(self, runner, write_graph, rainbow_k4, tmp_path):
        """Test extension of one edge to two trees"""
        forests = tmp_path / "forests.txt"
        forests.write_text("0\n-\n")
        result = runner.invoke(cli, ["--json", "extend", write_graph(rainbow_k4), "--t", "2", "--forests", str(forests)])
        assert result.exit_code == EXIT_OK
        document = parse_certificate(result.output)
        assert 0 in document.trees[0]

    def test_extend_proven_absent(self, runner, write_graph, tmp_path):
        """Test exit 2 when no partition violates but no extension exists"""
        graph = EdgeColoredMultigraph(
            4, ((0, 2, 0), (3, 1, 1), (1, 2, 2), (3, 2, 3), (3, 1, 3), (1, 0, 4), (1, 2, 5), (0, 1, 2))
        )
        forests = tmp_path / "forests.txt"
        forests.write_text("1 3\n-\n")
        result = runner.invoke(cli, ["--json", "extend", write_graph(graph), "--t", "2", "--forests", str(forests)])
        assert result.exit_code == EXIT_NEGATIVE
        document = parse_certificate(result.output)
        assert document.result == "proven-absent"
        assert document.partition is None and document.trees is None

    def test_trees(self, runner, write_graph, rainbow_k4, mono_k4):
        """Test edge-disjoint trees and a proven absence"""
        result = runner.invoke(cli, ["--json", "trees", write_graph(rainbow_k4), "--t", "2"])
        assert result.exit_code == EXIT_OK
        assert parse_certificate(result.output).route == "exhaustive"
        result = runner.invoke(cli, ["trees", write_graph(mono_k4, "mono.ecg"), "--t", "1"])
        assert result.exit_code == EXIT_NEGATIVE
        assert result.output.startswith("proven-absent")

    def test_budget(self, runner, write_graph, rainbow_k4):
        """Test that an exhausted budget exits 3"""
        result = runner.invoke(cli, ["--budget", "1", "trees", write_graph(rainbow_k4), "--t", "2"])
        assert result.exit_code == EXIT_BUDGET


class TestAnti:
    """Test the anti-Ramsey commands"""

    def test_formula(self, runner):
        """Test r(6, 2) = 8"""
        result = runner.invoke(cli, ["anti", "formula", "--n", "6", "--t", "2"])
        assert result.exit_code == EXIT_OK
        assert result.output == "8\n"

    def test_formula_out_of_range(self):
        """Test that n < 2t is a usage error"""
        assert run_cli(["anti", "formula", "--n", "3", "--t", "2"]) == EXIT_USAGE

    def test_construct(self, runner):
        """Test that the printed coloring parses and has r(n, t) colors"""
        result = runner.invoke(cli, ["--json", "anti", "construct", "--n", "5", "--t", "2", "--seed", "1"])
        assert result.exit_code == EXIT_OK
        document = parse_certificate(result.output)
        assert document.value == 6
        assert parse_graph(document.graph).graph.num_colors == 6

    def test_verify(self, runner):
        """Test the exhaustive check for K_4 and one tree"""
        result = runner.invoke(cli, ["--json", "anti", "verify", "--n", "4", "--t", "1"])
        assert result.exit_code == EXIT_OK
        document = parse_certificate(result.output)
        assert document.result == "confirmed"
        assert document.stats.colorings == 91


class TestUsageErrors:
    """Test exit code 1 for bad invocations"""

    def test_missing_t(self, write_graph, rainbow_k4):
        """Test check without --t or --certificate"""
        assert run_cli(["check", write_graph(rainbow_k4)]) == EXIT_USAGE

    def test_ext_without_forests(self, write_graph, rainbow_k4):
        """Test --mode ext without a forest file"""
        assert run_cli(["check", write_graph(rainbow_k4), "--t", "1", "--mode", "ext"]) == EXIT_USAGE

    def test_unknown_command(self):
        """Test an unknown subcommand"""
        assert run_cli(["grow"]) == EXIT_USAGE

    def test_malformed_graph(self, tmp_path):
        """Test a graph file with a loop"""
        path = tmp_path / "bad.ecg"
        path.write_text("ecg 2 1 1\n0 0 a\n")
        assert run_cli(["solve", str(path), "--t", "1"]) == EXIT_USAGE

    def test_forest_count_mismatch(self, write_graph, rainbow_k4, tmp_path):
        """Test a forest file with the wrong number of forests"""
        forests = tmp_path / "forests.txt"
        forests.write_text("0\n")
        assert run_cli(["extend", write_graph(rainbow_k4), "--t", "2", "--forests", str(forests)]) == EXIT_USAGE

    def test_success_through_run_cli(self, write_graph, rainbow_k4):
        """Test that run_cli passes through the command's exit code"""
        assert run_cli(["solve", write_graph(rainbow_k4), "--t", "2"]) == EXIT_OK
