import tdcis


def test_import():
    assert tdcis is not None
