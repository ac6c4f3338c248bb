# traced.py
import logging, time
log = logging.getLogger("hocqa.pipeline")

class traced:
    """Stage timer: logs start, duration and failures; keeps `elapsed` for reports."""
    def __init__(self, stage): self.stage = stage; self.elapsed = 0.0
    def __enter__(self): log.info(f"▶ {self.stage}"); self.t0=time.perf_counter(); return self
    def __exit__(self, et, ev, tb):
        self.elapsed = time.perf_counter()-self.t0
        if et:
            log.exception(f"✖ {self.stage} failed")  # traceback!
            return False  # DO NOT swallow
        log.info(f"✓ {self.stage} ok in {self.elapsed:.3f}s")
