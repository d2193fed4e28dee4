"""
Test that all public imports work correctly.
This ensures the package is properly structured.
"""


def test_main_imports():
    """Test importing main components"""
    from koenigs import (
        koenigs_config,
        speeds_at,
        hm_wos,
        slope_classify,
        run_suite,
    )

    assert koenigs_config is not None
    assert speeds_at is not None
    assert hm_wos is not None
    assert slope_classify is not None
    assert run_suite is not None


def test_model_imports():
    """Test importing semigroup families"""
    from koenigs import (
        ParabolicAutoPlus,
        ParabolicAutoMinus,
        HyperbolicGroup,
        SectorFamily,
        OmegaSemigroup,
        HalfParabolaSemigroup,
        ReducedModel,
    )

    assert ParabolicAutoPlus.family == "parabolic-auto"
    assert ParabolicAutoMinus.family == "parabolic-auto-minus"
    assert HyperbolicGroup.family == "hyperbolic"
    assert SectorFamily.family == "sector"
    assert OmegaSemigroup.family == "omega"
    assert HalfParabolaSemigroup.family == "half-parabola"
    assert ReducedModel.family == "reduced"


def test_error_hierarchy():
    """Test all errors share the package base class"""
    from koenigs import (
        KoenigsError,
        DomainError,
        PoleError,
        BranchError,
        ConvergenceError,
        BracketError,
        PreconditionError,
        InconclusiveError,
    )

    for error in (DomainError, ConvergenceError, PreconditionError, InconclusiveError):
        assert issubclass(error, KoenigsError)
    assert issubclass(PoleError, DomainError)
    assert issubclass(BranchError, DomainError)
    assert issubclass(BracketError, ConvergenceError)


def test_all_exports_exist():
    """Test every name in __all__ resolves"""
    import koenigs

    for name in koenigs.__all__:
        assert hasattr(koenigs, name), name


def test_version():
    """Test version is defined"""
    from koenigs import __version__

    assert __version__ == "1.0.0"


def test_cli_entry_point():
    """Test CLI main is importable"""
    from koenigs.cli import main

    assert callable(main)
