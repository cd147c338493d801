"""Shared builders for extractor tests: tiny corpora and solid-color images."""

from PIL import Image


def write_corpus(path, rows) -> None:
    """rows: (id, image ref) pairs."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("id,image,description\n")
        for meme_id, ref in rows:
            fh.write(f"{meme_id},{ref},placeholder text\n")


def make_solid(path, rgb, size=(48, 48)) -> None:
    Image.new("RGB", size, rgb).save(path)
