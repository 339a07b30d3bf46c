"""Dataset assembly tests: node ordering, dyad validation, CSV ingestion."""

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from dyadcov import (
    DuplicateDyadError,
    DyadDataError,
    EmptyDatasetError,
    NodeOrder,
    RaggedRegressorsError,
    SelfLoopError,
    UnknownLabelError,
    build_dataset,
    canonical_dyads,
    complete_dyads,
    expand_node_effects,
    read_dyad_csv,
    read_order_csv,
)


def test_order_from_values_sorts_ascending():
    order = NodeOrder.from_values(["A", "B", "C"], [2.0, 1.0, 3.0])
    assert order.labels == ("B", "A", "C")
    assert order.rank("B") == 1
    assert order.rank("A") == 2
    assert order.rank("C") == 3


def test_order_ties_break_by_label():
    order = NodeOrder.from_values(["z", "a", "m"], [1.0, 1.0, 1.0])
    assert order.labels == ("a", "m", "z")


def test_order_identity_and_len():
    order = NodeOrder.identity(4)
    assert len(order) == 4
    assert order.labels == ("1", "2", "3", "4")
    assert order.rank("3") == 3


def test_order_unknown_label_raises():
    order = NodeOrder.identity(3)
    with pytest.raises(UnknownLabelError):
        order.rank("17")


def test_order_rejects_duplicates_and_empty():
    with pytest.raises(DyadDataError):
        NodeOrder(["a", "a"])
    with pytest.raises(DyadDataError):
        NodeOrder([])
    with pytest.raises(DyadDataError):
        NodeOrder.from_values(["a", "b"], [1.0])


def test_complete_dyads_counts_and_order():
    dyads = complete_dyads(4)
    assert dyads.shape == (6, 2)
    assert_array_equal(dyads[0], [1, 2])
    assert_array_equal(dyads[-1], [3, 4])
    assert (dyads[:, 0] < dyads[:, 1]).all()
    for n in range(2, 9):
        assert complete_dyads(n).shape[0] == n * (n - 1) // 2


def test_canonical_dyads_reorders_endpoints():
    out = canonical_dyads(np.array([[3, 1], [2, 4]]), 4)
    assert_array_equal(out, [[1, 3], [2, 4]])
    assert out.dtype == np.int64


def test_canonical_dyads_rejects_bad_input():
    with pytest.raises(DyadDataError):
        canonical_dyads(np.array([[0, 2]]), 4)
    with pytest.raises(DyadDataError):
        canonical_dyads(np.array([[1, 5]]), 4)
    with pytest.raises(SelfLoopError):
        canonical_dyads(np.array([[2, 2]]), 4)
    with pytest.raises(DuplicateDyadError):
        canonical_dyads(np.array([[1, 2], [2, 1]]), 4)
    with pytest.raises(EmptyDatasetError):
        canonical_dyads(np.empty((0, 2), dtype=np.int64), 4)
    with pytest.raises(DyadDataError):
        canonical_dyads(np.array([[1.5, 2.0]]), 4)
    with pytest.raises(DyadDataError):
        canonical_dyads(np.array([1, 2, 3]), 4)


def _toy_rows():
    return [
        ("A", "B", 1.0, (1.0, 0.5)),
        ("A", "C", 2.0, (1.0, -0.5)),
        ("B", "C", 3.0, (1.0, 0.0)),
    ]


def test_build_dataset_maps_labels_to_ranks():
    order = NodeOrder.from_values(["A", "B", "C"], [2.0, 1.0, 3.0])
    ds = build_dataset(_toy_rows(), order)
    # B has the smallest order value, so (A, B) becomes ranks (1, 2).
    assert_array_equal(ds.dyads, [[1, 2], [2, 3], [1, 3]])
    assert ds.m == 3 and ds.k == 2 and ds.n == 3
    assert ds.is_complete
    assert ds.x_names == ("x1", "x2")
    assert_array_equal(ds.y, [1.0, 2.0, 3.0])


def test_build_dataset_named_columns():
    ds = build_dataset(_toy_rows(), NodeOrder(["A", "B", "C"]), x_names=["const", "dist"])
    assert ds.x_names == ("const", "dist")


def test_build_dataset_rejects_bad_rows():
    order = NodeOrder(["A", "B", "C"])
    with pytest.raises(SelfLoopError):
        build_dataset([("A", "A", 1.0, (1.0,))], order)
    with pytest.raises(RaggedRegressorsError):
        build_dataset([("A", "B", 1.0, (1.0,)), ("A", "C", 1.0, (1.0, 2.0))], order)
    with pytest.raises(UnknownLabelError):
        build_dataset([("A", "Z", 1.0, (1.0,))], order)
    with pytest.raises(EmptyDatasetError):
        build_dataset([], order)
    with pytest.raises(DyadDataError):
        build_dataset([("A", "B", 1.0, ())], order)


def test_dataset_arrays_are_read_only():
    ds = build_dataset(_toy_rows(), NodeOrder(["A", "B", "C"]))
    with pytest.raises(ValueError):
        ds.y[0] = 9.9


def test_expand_node_effects_small_case():
    ds = build_dataset(_toy_rows(), NodeOrder(["A", "B", "C"]))
    out = expand_node_effects(ds)
    # Dummies cover ranks 2 and 3; rank 1 is dropped.
    assert out.k == ds.k + 2
    assert out.x_names[-2:] == ("fe_B", "fe_C")
    dummy = {tuple(d): tuple(row) for d, row in zip(out.dyads, out.X[:, -2:])}
    assert dummy[(1, 2)] == (1.0, 0.0)
    assert dummy[(2, 3)] == (1.0, 1.0)
    assert dummy[(1, 3)] == (0.0, 1.0)


def test_expand_node_effects_two_nodes():
    ds = build_dataset([("A", "B", 1.0, (1.0,))], NodeOrder(["A", "B"]))
    out = expand_node_effects(ds)
    assert out.k == 2
    assert out.x_names == ("x1", "fe_B")


def test_expand_node_effects_column_count():
    # K regressors on n nodes expand to K + (n - 1) columns.
    n = 156
    rng = np.random.default_rng(0)
    dyads = complete_dyads(n)[:400]
    rows = [
        (str(i), str(j), 0.0, tuple(rng.standard_normal(6)))
        for i, j in dyads
    ]
    out = expand_node_effects(build_dataset(rows, NodeOrder.identity(n)))
    assert out.k == 6 + 155 == 161


def test_read_order_csv(tmp_path):
    path = tmp_path / "order.csv"
    path.write_text("node,order_value\nA,2.0\nB,1.0\nC,3.0\n")
    order = read_order_csv(path)
    assert order.labels == ("B", "A", "C")


def test_read_order_csv_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "order.csv"
    path.write_text("node,order_value\nA,1.0\nB,oops\n")
    with pytest.raises(DyadDataError, match="line 3"):
        read_order_csv(path)
    path.write_text("node,order_value\nA,1.0\nA,2.0\n")
    with pytest.raises(DyadDataError, match="duplicate node 'A'"):
        read_order_csv(path)
    path.write_text("who,what\nA,1.0\n")
    with pytest.raises(DyadDataError, match="expected header"):
        read_order_csv(path)


def test_read_dyad_csv_round_trip(tmp_path):
    data = tmp_path / "dyads.csv"
    data.write_text(
        "node_i,node_j,y,const,dist\n"
        "A,B,1.0,1,0.5\n"
        "A,C,2.0,1,-0.5\n"
        "B,C,3.0,1,0.0\n"
    )
    rows, x_names = read_dyad_csv(data)
    assert x_names == ("const", "dist")
    ds = build_dataset(rows, NodeOrder(["A", "B", "C"]), x_names)
    assert ds.m == 3
    assert ds.X[0, 1] == 0.5


def test_read_dyad_csv_errors_carry_line_numbers(tmp_path):
    data = tmp_path / "dyads.csv"
    data.write_text("node_i,node_j,y,x1\nA,B,1.0,bad\n")
    with pytest.raises(DyadDataError, match="line 2"):
        read_dyad_csv(data)
    data.write_text("node_i,node_j,y,x1\nA,B,1.0\n")
    with pytest.raises(DyadDataError, match="expected 4 fields"):
        read_dyad_csv(data)
    data.write_text("node_i,node_j,y\nA,B,1.0\n")
    with pytest.raises(DyadDataError, match="at least one regressor"):
        read_dyad_csv(data)
    data.write_text("node_i,node_j,y,x1\nA,B,inf,1.0\n")
    with pytest.raises(DyadDataError, match="finite"):
        read_dyad_csv(data)
