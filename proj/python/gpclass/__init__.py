"""Latent Gaussian process classification of labelled computer model output.

Fit a latent-process classifier with :func:`fit`, then query the returned
:class:`Fit` for joint predictive probabilities, the 1-D boundary summary
and leave-one-out diagnostics. Baselines (:func:`fit_logistic`,
:func:`voronoi_labels`, :func:`average_bernoulli`) and the built-in example
problems are exposed alongside. Labels are the strings ``"l1"`` and
``"l2"``; the first region is the one where the latent process is negative.
"""

try:
    from . import _core  # installed package layout
except ImportError:  # build tree: extension sits next to the package dir
    import _core

Fit = _core.Fit
fit = _core.fit
fit_logistic = _core.fit_logistic
logistic_probs = _core.logistic_probs
average_bernoulli = _core.average_bernoulli
bernoulli_sample = _core.bernoulli_sample
voronoi_labels = _core.voronoi_labels
maximin_lhs = _core.maximin_lhs
example_1d = _core.example_1d
example_2d_plane = _core.example_2d_plane
santner_dataset = _core.santner_dataset
load_dataset = _core.load_dataset
run_demo = _core.run_demo

__version__ = _core.__version__

__all__ = [
    "Fit",
    "fit",
    "fit_logistic",
    "logistic_probs",
    "average_bernoulli",
    "bernoulli_sample",
    "voronoi_labels",
    "maximin_lhs",
    "example_1d",
    "example_2d_plane",
    "santner_dataset",
    "load_dataset",
    "run_demo",
    "__version__",
]
