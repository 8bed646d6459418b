from ces_solver.examples.partner_plots import f


def test_partner_plot_data():
    table = f.update_parameters(points=20).table()
    assert len(table) == 20
    assert (table.V_plus > table.V_minus).all()

    marks = f.marks()
    assert len(marks.x_zero_crossings) == 2
