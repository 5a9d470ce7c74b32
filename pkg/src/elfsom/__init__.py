"""elfsom: self-organizing-map classification of ELF magnetic-field spectra.

Typical use::

    from elfsom import parse_spectrum_csv, build_dataset, MeasurementPosition
    from elfsom import SomConfig, train, build_level_report, render_report

    samples = parse_spectrum_csv(open("sweeps.csv", "rb").read())
    dataset = build_dataset(samples, MeasurementPosition.TOP)
    network, trace = train(dataset, SomConfig(seed=0))
    print(render_report(build_level_report(dataset, network)).decode())
"""

__version__ = "0.1.0"

from .binning import BinAssignment, equal_frequency_bins, equal_width_bins
from .ingest import (
    AdapterSummary,
    EmissionDataset,
    EmissionInstance,
    MeasurementPosition,
    SpectrumSample,
    build_all_datasets,
    build_dataset,
    parse_spectrum_csv,
    summarize_adapters,
    write_spectrum_csv,
)
from .plot import PlotData, emit_plot_data, write_plot_data
from .report import (
    EmissionLevel,
    LevelReport,
    LevelRow,
    Safety,
    build_level_report,
    order_clusters,
    render_report,
)
from .som import (
    SomConfig,
    SomNetwork,
    TrainingTrace,
    classify,
    find_bmu,
    grid_distance,
    init_network,
    learning_rate,
    load_model,
    neighborhood_radius,
    quantization_error,
    save_model,
    train,
    train_step,
)
