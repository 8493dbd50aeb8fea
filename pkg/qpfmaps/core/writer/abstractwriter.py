# Custom imports
import qpfmaps.commons as cm

LOGGER = cm.logger()


class AbstractWriter:
    """Base class of the writers exporting results into a file

    Subclass it if you want a new output format.

    Attributes:
        device: a file object typically returned by open("w") (or "wb"
            for binary formats)

    Example:
        >>> with open(filename, "w") as file:
        ...    writer = MyWriter(file, rows)
        ...    writer.save()
    """

    def __init__(self, device):
        self.device = device

    def async_save(self, *args, **kwargs):
        """Write the data and yield the number of records written so far"""
        raise NotImplementedError()

    def save(self, *args, **kwargs):
        count = 0
        for count in self.async_save(*args, **kwargs):
            pass
        LOGGER.info("%s: %d records saved", self.__class__.__name__, count)
        return count

    def total_count(self) -> int:
        """Number of records that will get written"""
        raise NotImplementedError()
