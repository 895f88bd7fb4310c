// Trailing-edge debouncer. The default interval keeps slider-driven traffic
// at or below 4 requests per second; only the last scheduled op runs.
export class Debouncer {
  private handle: ReturnType<typeof setTimeout> | undefined;

  constructor(private readonly intervalMs = 250) {}

  schedule(op: () => void) {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = setTimeout(() => {
      this.handle = undefined;
      op();
    }, this.intervalMs);
  }

  cancel() {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = undefined;
  }
}
