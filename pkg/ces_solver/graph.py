from __future__ import annotations

from collections import defaultdict, namedtuple
from inspect import Parameter, signature
from itertools import groupby
from logging import getLogger
from typing import Any, Callable

import graphviz
import networkx as nx
from littleutils import ensure_list_if_string, strip_required_prefix

from .calculation import calculate, calculate_collect_exceptions

log = getLogger(__name__)


ComposerTestResult = namedtuple("TestResult", "name passed exception result")
"""
The results of Composer.run_tests()
"""


class Composer:
    """
    An immutable graph of pure functions, wired together by argument names.

    The spectral parameters of the exact solutions and the verification
    suite are both Composers: each quantity is a small function whose
    arguments name the quantities it is built from.
    """

    def __init__(self, *, _functions=None, _parameters=None, _tests=None):
        # These are namespaced
        self._functions = _functions or {}
        self._parameters = _parameters or {}
        self._tests = _tests or {}

    def _copy(self, **kwargs):
        return type(self)(
            **{
                **dict(
                    _functions=self._functions,
                    _parameters=self._parameters,
                    _tests=self._tests,
                ),
                **kwargs,
            }
        )

    def update(self, *args: Callable, **kwargs: Callable) -> Composer:
        """
        Add functions to the composer.

        Args:
            args: Positional arguments use the __name__ of the function as the reference
        in the graph.
            kwargs: Keyword arguments use the key as the name of the function in the graph.

        Returns:
            A new composer with the functions added.
        """
        args_with_names = {arg.__name__: arg for arg in args}
        all_args = {**self._functions, **args_with_names, **kwargs}
        parameters = {
            k: v
            for k, v in self._parameters.items()
            if k not in args_with_names and k not in kwargs
        }
        for argname, argument in all_args.items():
            if not callable(argument):
                raise Exception(
                    f"Argument '{argname}' is not a function or callable. All arguments must be callable."
                )

        return self._copy(_functions=all_args, _parameters=parameters)

    def update_without_prefix(
        self, prefix: str, *functions: Callable, **kwargs: Callable
    ) -> Composer:
        """
        Add functions after stripping ``prefix`` from their names, so
        ``check_wronskian`` lands in the graph as ``wronskian``.
        """
        args_with_names = {
            strip_required_prefix(arg.__name__, prefix): arg for arg in functions
        }
        return self.update(**args_with_names, **kwargs)

    def update_namespaces(self, **namespaces: Composer) -> Composer:
        """
        Given a group of keyword named composers, create a series of functions
        namespaced by the keywords and drawn from the composers' functions.

        Args:
            namespaces: Composers that will be added at the namespace that corresponds \
            to the arguments key

        Returns:
            A new Composer with all the input composers functions added as namespaces.
        """
        return self._copy(
            **{
                arg: {
                    **getattr(self, arg),
                    **{
                        "__".join([namespace, k]): value
                        for namespace, composer in namespaces.items()
                        for k, value in getattr(composer, arg).items()
                    },
                }
                for arg in ["_functions", "_parameters"]
            }
        )

    def update_parameters(self, **parameters: Any) -> Composer:
        """
        Pass static values into the graph, exposed as zero-argument functions.

        A value may be given as ``(type, value)``; otherwise the type of the
        first value seen for that name is enforced, with ints promoted to float.
        """
        hydrated_parameters = {}
        for key, parameter in parameters.items():
            if isinstance(parameter, tuple) and len(parameter) == 2 and isinstance(parameter[0], type):
                hydrated_parameters[key] = parameter
            else:
                type_ = self._parameters.get(key, (type(parameter), None))[0]
                hydrated_parameters[key] = (type_, parameter)

        def serve_parameter(key, type_, value):
            def parameter():
                cast_value = value
                if isinstance(cast_value, int) and issubclass(type_, float):
                    cast_value = float(value)

                if not isinstance(cast_value, type_):
                    raise Exception(f"Parameter '{key}' is not of type {type_}")
                return cast_value

            return parameter

        return self._copy(
            _parameters={**self._parameters, **hydrated_parameters},
            _functions={
                **self._functions,
                **{
                    # Have to capture the value eagerly
                    key: serve_parameter(key, type_, value)
                    for key, (type_, value) in hydrated_parameters.items()
                },
            },
        )

    def update_tests(self, **tests) -> Composer:
        """
        Adds tests to the composer.

        A test resolves its arguments exactly like a function. It fails if it
        raises, or if it returns something with a false ``passed`` attribute.
        """
        return self._copy(_tests={**self._tests, **tests})

    def select_tests(self, names) -> Composer:
        """A copy that keeps only the named tests."""
        names = ensure_list_if_string(names)
        unknown = [name for name in names if name not in self._tests]
        if unknown:
            raise Exception(f"Unknown tests {unknown}.")
        return self._copy(_tests={name: self._tests[name] for name in names})

    def link(self, **kwargs):
        """
        Create a symlink between an argument name and a function output.

        `f.link(z1__A="A1")` is the same as `f.update(z1__A=lambda A1: A1)`.
        """

        def make_link_fn(source):
            fn = eval(f"lambda {source}: {source}")
            fn._is_link = True
            return fn

        fns = {key: make_link_fn(source) for key, source in kwargs.items()}
        return self.update(**fns)

    def functions(self):
        return self._functions

    def parameters(self):
        """
        Dictionary of the parameters of the form {key: (type, value)}
        """
        return self._parameters

    def tests(self):
        return self._tests

    def check(self, outputs=None):
        """
        Returns a generator of errors if there are any errors in the function graph.
        """
        if outputs is None:
            dag = self.dag()
        else:
            dag = self.ancestor_dag(outputs)

        cycles = list(nx.simple_cycles(dag))
        if cycles:
            yield dict(
                type="cycle",
                message=f"Cycle found [{', '.join(cycles[0])}]. The function graph must be acyclic.",
            )

        for unbound_fn, calling_fns in self.subgraph(dag.nodes())._unbound().items():
            yield dict(
                type="unbound",
                message=f"Unbound function '{unbound_fn}' required.",
                function=unbound_fn,
                referers=calling_fns,
            )

    def calculate(self, outputs, perform_checks=True, intermediates=False, progress_callback=None):
        return calculate(self, outputs, perform_checks, intermediates, progress_callback)

    def run_tests(self, progress_callback=None):
        """
        Run all the composer tests.

        Shared inputs are calculated once. If one of them raises, every test
        that needs it fails with that exception; the other tests still run.

        Returns:
            A generator of ComposerTestResult(name, passed, exception, result).
        """
        referenced = {
            tname: {
                pname: self._resolve_predecessor(tname, pname)
                for pname in signature(fn).parameters
            }
            for tname, fn in self._tests.items()
        }
        needed = sorted({name for names in referenced.values() for name in names.values()})

        callback = progress_callback or (lambda *args, **kwargs: None)
        results, failures = self._calculate_around_failures(needed, progress_callback)

        for tname, fn in self._tests.items():
            missing = [name for name in referenced[tname].values() if name not in results]
            if missing:
                yield ComposerTestResult(
                    name=tname,
                    passed=False,
                    exception=self._upstream_failure(missing, failures)
                    or Exception(f"Inputs {missing} not calculated"),
                    result=None,
                )
                continue

            arguments = {
                pname: results[name] for pname, name in referenced[tname].items()
            }
            callback("start_test", dict(name=tname))
            try:
                result = fn(**arguments)
            except Exception as e:
                callback("end_test", dict(name=tname))
                log.debug("Test '%s' raised %r", tname, e)
                yield ComposerTestResult(name=tname, passed=False, exception=e, result=None)
            else:
                callback("end_test", dict(name=tname))
                passed = bool(getattr(result, "passed", True))
                yield ComposerTestResult(name=tname, passed=passed, exception=None, result=result)

    def _calculate_around_failures(self, needed, progress_callback):
        """
        Calculate ``needed``, skipping past any function that raises to
        whatever does not depend on it. Returns (results, {node: exception}).
        """
        results = {}
        failures = {}
        blocked = set()
        remaining = list(needed)
        while remaining:
            partial, exception_info = calculate_collect_exceptions(
                self, remaining, progress_callback=progress_callback
            )
            results.update({k: v for k, v in partial.items() if k in needed})
            if not exception_info:
                break
            node = exception_info[3]
            failures[node] = exception_info[1]
            if node is None:
                break
            blocked |= {node} | nx.descendants(self.dag(), node)
            remaining = [n for n in needed if n not in results and n not in blocked]
        return results, failures

    def _upstream_failure(self, missing, failures):
        if None in failures:
            return failures[None]
        dag = self.dag()
        for name in missing:
            for node, exception in failures.items():
                if node == name or node in nx.ancestors(dag, name):
                    return exception
        return None

    def call(self, output):
        """
        A convenience method to calculate a single output
        """
        return self.calculate([output])[output]

    def __getattr__(self, name):
        """
        Allow composed functions to be easily called.
        """
        if name.startswith("_"):
            raise AttributeError(name)
        name = name.replace(".", "__")
        if name in self._functions:
            return lambda: self.calculate([name])[name]
        else:
            raise AttributeError(
                f"{self.__class__.__name__} object has no attribute '{name}', nor any composed function '{name}'."
            )

    def dag(self):
        """
        Generates the DAG representing the function graph.

        :rtype: a networkx.DiGraph instance with function names as nodes
        """
        G = nx.DiGraph()

        for key in self._functions:
            G.add_node(key)

        for key in self._functions:
            predecessors = self._resolve_predecessors(key)
            G.add_edges_from([(resolved, key) for _, resolved in predecessors])

        return G

    def ancestor_dag(self, outputs):
        """
        A dag of all the ancestors of the given outputs, i.e. the functions that must be calculated
        to for the given outputs.
        """
        full_dag = self.dag()
        ancestors = set(outputs) | {
            pred for output in outputs for pred in nx.ancestors(full_dag, output)
        }
        return full_dag.subgraph(ancestors)

    def subgraph(self, function_names):
        """
        Given a collection of function names this will create a new
        composer that only consists of those nodes.
        """
        return self._copy(
            _functions={
                k: self._functions[k] for k in function_names if k in self._functions
            },
            _parameters={
                k: v for k, v in self._parameters.items() if k in function_names
            },
        )

    def test_dag(self):
        """The DAG extended with one node per test, fed by the nodes it reads."""
        G = self.dag().copy()
        for tname, fn in self._tests.items():
            G.add_node(tname, test=True)
            for pname in signature(fn).parameters:
                G.add_edge(self._resolve_predecessor(tname, pname), tname)
        return G

    def graphviz(self, *, test_results=None, hide_parameters=False):
        """
        A graphviz.Digraph of the functions and tests, suitable for display
        or for writing out as DOT source.

        Tests are drawn as ellipses, green if they passed and red if they
        failed, when ``test_results`` (from run_tests) is given.
        """
        verdicts = {result.name: result.passed for result in (test_results or [])}
        dag = self.test_dag()

        def create_subgraph(tree, name=None):
            g = graphviz.Digraph(name=f"cluster_{name}" if name else None)
            if name:
                g.attr("graph", label=name, fontname="arial", title="")

            for k, v in tree.items():
                if not isinstance(v, str):
                    g.subgraph(create_subgraph(v, k))
                    continue
                if hide_parameters and v in self._parameters:
                    continue

                node_styles = dict(style="rounded, filled", fontname="arial", shape="rect")
                if v in self._tests:
                    passed = verdicts.get(v)
                    color = {True: "#7dc242", False: "red"}.get(passed, "white")
                    node_styles.update(shape="ellipse")
                elif v in self._parameters:
                    color = "lightblue"
                else:
                    color = "lightgrey"
                node_styles.update(fillcolor=color)

                fn = self._functions.get(v)
                if fn is not None and getattr(fn, "_is_link", False):
                    node_styles.update(shape="circle", height="0.2", width="0.2")
                    label = ""
                else:
                    label = k.replace("_", "\n")
                g.node(v, label=label, **node_styles)
            return g

        result = create_subgraph(self._build_name_tree(dag.nodes()))
        result.attr("graph", rankdir="BT")
        for pred, node in dag.edges():
            if hide_parameters and pred in self._parameters:
                continue
            result.edge(pred, node)
        return result

    def _build_name_tree(self, nodes):
        # Namespaces become nested clusters
        def recursive_tree():
            return defaultdict(recursive_tree)

        tree = recursive_tree()
        for node in nodes:
            root = tree
            parts = node.split("__")
            for part in parts[:-1]:
                root = root[part]
            root[parts[-1]] = node
        return tree

    def _unbound(self):
        return {
            k: [t for _, t in v]
            for k, v in groupby(
                sorted(
                    [
                        (arg, key)
                        for key in self._functions
                        for _, arg in self._resolve_predecessors(key)
                        if arg not in self._functions
                    ]
                ),
                key=lambda t: t[0],
            )
        }

    def _resolve_predecessor(self, fname, pname):
        fparts = fname.split("__")[:]
        possible_preds = [
            "__".join(fparts[:i] + [pname]) for i in range(0, len(fparts))
        ]
        possible_preds.reverse()
        for possible in possible_preds:
            if possible in self._functions:
                return possible
        else:
            return possible_preds[0]

    def _resolve_predecessors(self, fname):
        if fname not in self._functions:
            return []

        fn = self._functions[fname]
        for key, parameter in signature(fn).parameters.items():
            resolved_name = self._resolve_predecessor(fname, key)
            if parameter.default is not Parameter.empty:
                if resolved_name in self._functions:
                    yield key, resolved_name
            else:
                yield key, resolved_name
