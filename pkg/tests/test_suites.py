from qvbs import suites


def test_symmetries_suite():
    rep = suites.suite_symmetries()
    assert rep["passed"]
    d = rep["details"]
    assert d["translation_exact"] is True
    assert all(r["match"] for r in d["bar_symmetry"])
    assert all(r["exact"] for r in d["spin_flip"])
    # unique closed-chain ground state at the measured sizes
    assert all(r["kernel_dim"] == 1 for r in d["pbc_kernel_dims_measured"])
    # finite-size error shrinks monotonically from the first measured size on
    assert d["monotone_from_index"] == 0


def test_suite_registry_complete():
    assert set(suites.SUITE_BY_NAME) == {
        "spectrum", "conjecture", "divisibility", "groundstate", "mps",
        "szdist", "correlators", "oracle", "algebra", "symmetries",
        "certificates",
    }
    assert len(suites.ACCEPTANCE_SUITES) == 9


def test_run_acceptance_shape():
    lines = []
    rep = suites.run_acceptance(seed=0, progress=lines.append)
    assert rep["passed"]
    assert [it["criterion"] for it in rep["items"]] == list(range(1, 10))
    assert len(lines) == 9


def test_certificates_suite():
    rep = suites.suite_exact_certificates()
    assert rep["passed"]
    assert [r["S"] for r in rep["details"]["spectrum_certificates"]] == [1, 2, 3, 4]
    assert all(r["proved"] for r in rep["details"]["spectrum_certificates"])
    assert all(r["solution_space_identified"]
               for r in rep["details"]["two_site_lemma"])
