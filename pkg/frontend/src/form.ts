/**
 * Client-side mirror of the completeness gate.
 *
 * The submit control stays disabled until every one of the 58 items carries
 * an answer on the 1..5 scale. The server re-validates on submission; this
 * state only exists to stop doomed submissions and to drive the progress UI.
 */

export class FormState {
  private readonly answers = new Map<string, number>();
  private readonly known: ReadonlySet<string>;

  constructor(readonly itemIds: readonly string[]) {
    this.known = new Set(itemIds);
  }

  setAnswer(itemId: string, value: number): void {
    if (!this.known.has(itemId)) {
      throw new RangeError(`unknown item ${itemId}`);
    }
    if (!Number.isInteger(value) || value < 1 || value > 5) {
      throw new RangeError(`answer must be an integer 1..5, got ${value}`);
    }
    this.answers.set(itemId, value);
  }

  clearAnswer(itemId: string): void {
    this.answers.delete(itemId);
  }

  answerFor(itemId: string): number | undefined {
    return this.answers.get(itemId);
  }

  get answeredCount(): number {
    return this.answers.size;
  }

  get total(): number {
    return this.itemIds.length;
  }

  get complete(): boolean {
    return this.answeredCount === this.total;
  }

  get progressLabel(): string {
    return `${this.answeredCount}/${this.total}`;
  }

  missingItems(): string[] {
    return this.itemIds.filter((itemId) => !this.answers.has(itemId));
  }

  toPayload(): Record<string, number> {
    return Object.fromEntries(this.answers);
  }
}
