import pytest

from ces_solver import Composer, Profiler
from ces_solver.calculation import bound_argument_names
from ces_solver.oracle import VerificationReport
from ces_solver.solutions import SPECTRAL_GRAPH

from .utils import compare_output_subsets, generate_random_graph


def test_simple_parameters():
    composer = Composer().update(c=lambda a, b: a + b).update_parameters(a=1, b=(int, 2))
    assert composer.c() == 3


def test_parameter_type_is_enforced():
    composer = Composer().update(c=lambda a: a).update_parameters(a=1.5)
    composer = composer.update_parameters(a="text")
    with pytest.raises(Exception):
        composer.c()


def test_int_parameters_promote_to_float():
    composer = Composer().update(c=lambda a: a).update_parameters(a=1.5).update_parameters(a=2)
    assert composer.c() == 2.0
    assert isinstance(composer.c(), float)


def test_default_arguments():
    composer = Composer().update(c=lambda a, b=3: a + b).update_parameters(a=1)
    assert composer.c() == 4
    composer = Composer().update(c=lambda a, b=3: a + b).update_parameters(a=1, b=2)
    assert composer.c() == 3


def test_var_args_are_rejected():
    def d(a, *rest):
        return a

    with pytest.raises(Exception, match="Variable arguments"):
        bound_argument_names(d, {})


def test_basic_links():
    composer = Composer().update(a=lambda: 5, c=lambda b: b * 2).link(b="a")

    assert composer.c() == 10


def test_call_link():
    composer = Composer().update(a=lambda: 5, c=lambda b: b * 2).link(b="a")

    assert composer.b() == 5


def test_namespaces_with_links():
    child = Composer().update(a=lambda: 5, c=lambda b: b * 2).link(b="a")
    composer = (
        Composer()
        .update_namespaces(x=child, y=child)
        .link(outer_x="x__c", outer_y="y__c")
        .update(final=lambda outer_x, outer_y: outer_x + outer_y)
    )

    assert composer.final() == 20


def test_namespaced_functions_fall_back_to_outer_names():
    child = Composer().update(c=lambda factor: factor * 2)
    composer = Composer().update_namespaces(x=child).update_parameters(factor=3)
    assert composer.call("x__c") == 6


def test_update_without_prefix():
    def get_a():
        return 2

    def get_b(a):
        return a + 1

    composer = Composer().update_without_prefix("get_", get_a, get_b)
    assert composer.b() == 3


def test_non_callable_is_rejected():
    with pytest.raises(Exception, match="not a function"):
        Composer().update(a=5)


def test_cycles_are_reported():
    composer = Composer().update(a=lambda b: b, b=lambda a: a)
    errors = list(composer.check())
    assert errors[0]["type"] == "cycle"
    with pytest.raises(Exception, match="Cycle"):
        composer.a()


def test_unbound_names_are_reported():
    composer = Composer().update(a=lambda missing: missing)
    errors = list(composer.check())
    assert errors == [
        dict(
            type="unbound",
            message="Unbound function 'missing' required.",
            function="missing",
            referers=["a"],
        )
    ]


def test_random_graph_subsets_are_consistent():
    compare_output_subsets(generate_random_graph())


def test_run_tests_verdicts():
    def raises(a):
        raise ValueError("nope")

    composer = (
        Composer()
        .update(a=lambda: 1.0, broken=lambda a: 1 / 0)
        .update_tests(
            plain=lambda a: None,
            good_report=lambda a: VerificationReport("good", 0.0, 1.0, 1),
            bad_report=lambda a: VerificationReport("bad", 2.0, 1.0, 1),
            raises=raises,
            upstream=lambda broken: None,
        )
    )
    results = {result.name: result for result in composer.run_tests()}

    assert results["plain"].passed
    assert results["good_report"].passed
    assert results["good_report"].result.name == "good"
    assert not results["bad_report"].passed
    assert not results["raises"].passed
    assert isinstance(results["raises"].exception, ValueError)
    assert not results["upstream"].passed
    assert isinstance(results["upstream"].exception, ZeroDivisionError)


def test_select_tests():
    composer = Composer().update(a=lambda: 1).update_tests(one=lambda a: None, two=lambda a: None)
    assert list(composer.select_tests(["two"]).tests()) == ["two"]
    with pytest.raises(Exception):
        composer.select_tests(["three"])


def test_profiler_records_functions_and_tests():
    profiler = Profiler()
    composer = Composer().update(a=lambda: 1, b=lambda a: a + 1).update_tests(t=lambda b: None)
    list(composer.run_tests(progress_callback=profiler))
    results = profiler.results()

    assert set(results["functions"]) == {"a", "b"}
    assert all(r["total"] >= r["execution"] >= 0 for r in results["functions"].values())
    assert set(results["tests"]) == {"t"}


def test_graphviz_source_marks_verdicts():
    composer = (
        Composer()
        .update(a=lambda: 1)
        .update_namespaces(ns=Composer().update(b=lambda a: a))
        .update_tests(fine=lambda a: None, broken=lambda a: 1 / 0)
    )
    source = composer.graphviz(test_results=list(composer.run_tests())).source

    assert "cluster_ns" in source
    assert "#7dc242" in source
    assert "red" in source


def test_spectral_graph_wiring():
    graph = SPECTRAL_GRAPH.update_parameters(omega=1.0, m=1.0)
    results = graph.calculate(["A1", "z1__c", "z2__c", "v1__alpha", "v2__beta"])

    assert results["z1__c"] == 2 * results["A1"] + 0.5
    assert results["z2__c"] == 0.5 + 2j
    assert results["v1__alpha"] == results["A1"] + 1j * 2 ** 0.5
    assert results["v2__beta"] == 1j - 1j * 2 ** 0.5
    assert all(result.passed for result in graph.run_tests())
