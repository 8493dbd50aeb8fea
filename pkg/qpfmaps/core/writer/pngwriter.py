# Custom imports
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .abstractwriter import AbstractWriter
import qpfmaps.commons as cm

LOGGER = cm.logger()


class PngWriter(AbstractWriter):
    """Diagnostic picture of the attracting (red) and repelling (blue) graphs

    ``device`` is a path or a file object opened in binary mode.
    """

    def __init__(self, device, attractor, repeller=None, title=None, dpi=150):
        super().__init__(device)
        self.graphs = [g for g in (attractor, repeller) if g is not None]
        self.title = title
        self.dpi = dpi

    def total_count(self) -> int:
        return len(self.graphs)

    def async_save(self, *args, **kwargs):
        figure, axes = plt.subplots(figsize=(8, 5))
        try:
            for count, (graph, color) in enumerate(zip(self.graphs, ("red", "blue")), 1):
                axes.plot(graph.thetas, graph.values, ",", color=color, label=graph.direction)
            axes.set_xlabel("theta")
            axes.set_ylabel("x")
            axes.set_xlim(0.0, 1.0)
            if self.title:
                axes.set_title(self.title)
            axes.legend(loc="lower right")
            figure.savefig(self.device, format="png", dpi=self.dpi)
        finally:
            plt.close(figure)
        yield count
