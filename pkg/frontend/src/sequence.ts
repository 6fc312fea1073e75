// At most one prediction is rendered at a time: every submit takes a
// ticket, and a response only wins if no newer submit happened meanwhile.
// Stale responses are dropped, so two rapid submits cannot interleave.

export class LatestWins {
  private counter = 0;

  take(): number {
    return ++this.counter;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter;
  }
}
