from random import choice, randint
from textwrap import dedent

from hypothesis import strategies as st

from ces_solver import Composer

xs = st.floats(min_value=0.05, max_value=20.0)
positive_ms = st.floats(min_value=0.1, max_value=4.0)
omegas = st.floats(min_value=0.25, max_value=3.0)


def relative(value, reference):
    return abs(value - reference) / abs(reference)


def check_results_equal(results):
    keys = [set(result.keys()) for result in results]
    if any(k != keys[0] for k in keys):
        raise Exception("Keys differ")

    for key in results[0]:
        values = [result[key] for result in results]
        if any(v != values[0] for v in values):
            raise Exception(f"Difference found in {key}, results: {values}")


def compare_output_subsets(composer):
    """Calculating any subset of outputs gives the same values as calculating everything."""
    nodes = list(composer.dag().nodes())
    everything = composer.calculate(nodes)
    for _ in range(10):
        outputs = {choice(nodes) for _ in range(randint(1, len(nodes)))}
        intermediates = randint(0, 1) == 1
        subset = composer.calculate(outputs, intermediates=intermediates)
        check_results_equal([subset, {k: everything[k] for k in subset}])


def generate_random_graph(graph_size=42):
    functions = []

    def function_0():
        return 42

    functions.append(function_0)

    for i in range(1, graph_size):
        fn_name = f"function_{i}"
        num_args = randint(0, min(5, i - 1))
        arg_names = set()

        while len(arg_names) < num_args:
            arg_names.add(f"function_{randint(0, i - 1)}")

        body = " + ".join(arg_names) if arg_names else str(randint(0, 100))

        namespace = {}
        exec(
            dedent(
                f"""
            def {fn_name}({', '.join(sorted(arg_names))}):
                return {body}
            """
            ),
            namespace,
        )
        functions.append(namespace[fn_name])

    return Composer().update(*functions)
