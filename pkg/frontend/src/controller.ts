import { ApiClient, ApiError } from './api.js';
import type {
  Action,
  CheckPayload,
  HintPayload,
  MoveKind,
  StatePayload,
} from './types.js';

export type SwapStyle = 'plain' | 'paired' | 'balanced';

export interface HeaderSelection {
  axis: 'row' | 'col';
  index: number;
}

/**
 * Holds the server state verbatim plus pure UI concerns (selections,
 * highlights, last hint/check/error). Every game mutation is an API call;
 * nothing is evaluated or predicted locally.
 */
export class GameController {
  state: StatePayload | null = null;
  selection: HeaderSelection | null = null;
  pendingRowCard: number | null = null;
  highlightImage: number | null = null;
  lastHint: HintPayload | null = null;
  lastCheck: CheckPayload | null = null;
  lastError: string | null = null;
  swapStyle: SwapStyle = 'plain';

  private listeners: (() => void)[] = [];

  constructor(readonly api: ApiClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  private accept(state: StatePayload): void {
    this.state = state;
    this.lastError = null;
    this.notify();
  }

  private fail(err: unknown): void {
    this.lastError = err instanceof ApiError ? `${err.code}: ${err.message}`
      : err instanceof Error ? err.message : String(err);
    this.notify();
  }

  get gameId(): string | null {
    return this.state?.game_id ?? null;
  }

  get solved(): boolean {
    return this.state?.phase === 'solved';
  }

  imageName(img: number): string {
    return this.state?.deck.image_names?.[String(img)] ?? `#${img}`;
  }

  async newGame(order: number, seed: number, missing: 0 | 2): Promise<void> {
    try {
      const res = await this.api.createGame(order, seed, missing);
      this.selection = null;
      this.pendingRowCard = null;
      this.highlightImage = null;
      this.lastHint = null;
      this.lastCheck = null;
      this.accept(res.state);
    } catch (err) {
      this.fail(err);
    }
  }

  /** Refetch from the server; reloading must reproduce the same board. */
  async refresh(): Promise<void> {
    if (!this.gameId) return;
    try {
      this.accept(await this.api.getState(this.gameId));
    } catch (err) {
      this.fail(err);
    }
  }

  private async act(action: Action): Promise<void> {
    if (!this.gameId) return;
    try {
      const state = await this.api.postAction(this.gameId, action);
      this.lastHint = null;
      this.lastCheck = null;
      this.accept(state);
    } catch (err) {
      this.fail(err);
    }
  }

  async chooseInfinity(image: number): Promise<void> {
    await this.act({ type: 'choose_infinity', image });
  }

  /** First pick marks the row axis card, the second issues the action. */
  async pickAxisCard(cardId: number): Promise<void> {
    if (this.pendingRowCard === null) {
      this.pendingRowCard = cardId;
      this.notify();
      return;
    }
    if (this.pendingRowCard === cardId) {
      this.pendingRowCard = null;  // deselect, no server call
      this.notify();
      return;
    }
    const rowCard = this.pendingRowCard;
    this.pendingRowCard = null;
    await this.act({ type: 'choose_axes', row_card: rowCard, col_card: cardId });
  }

  /**
   * Row/column header gesture: two clicks on the same axis issue the move;
   * a repeated click deselects (equal indices never reach the server).
   */
  async clickHeader(axis: 'row' | 'col', index: number): Promise<void> {
    if (!this.selection || this.selection.axis !== axis) {
      this.selection = { axis, index };
      this.notify();
      return;
    }
    if (this.selection.index === index) {
      this.selection = null;  // double-click same header: no-op
      this.notify();
      return;
    }
    const i = this.selection.index;
    this.selection = null;
    const kind: MoveKind = this.swapStyle === 'plain'
      ? (axis === 'row' ? 'swap_rows' : 'swap_cols')
      : this.swapStyle;
    await this.act({ type: 'move', kind, i, j: index });
  }

  async setGuided(guided: boolean): Promise<void> {
    await this.act({ type: 'set_mode', guided });
  }

  setSwapStyle(style: SwapStyle): void {
    this.swapStyle = style;
    this.notify();
  }

  async restart(): Promise<void> {
    await this.act({ type: 'restart' });
  }

  toggleHighlight(image: number): void {
    this.highlightImage = this.highlightImage === image ? null : image;
    this.notify();
  }

  async requestHint(): Promise<void> {
    if (!this.gameId) return;
    try {
      this.lastHint = await this.api.getHint(this.gameId);
      if (this.lastHint.highlight_image !== null) {
        this.highlightImage = this.lastHint.highlight_image;
      }
      this.lastError = null;
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Apply the move the last hint suggested, if any. */
  async applyHint(): Promise<void> {
    const move = this.lastHint?.move;
    if (!move) return;
    await this.act({ type: 'move', ...move });
  }

  async requestCheck(): Promise<void> {
    if (!this.gameId) return;
    try {
      this.lastCheck = await this.api.getCheck(this.gameId);
      this.lastError = null;
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Cards carrying the chosen infinity image, for the axes phase. */
  infinityCards(): { id: number; images: number[] }[] {
    const s = this.state;
    if (!s || s.infinity_image === null) return [];
    return s.deck.cards.filter((c) => c.images.includes(s.infinity_image!));
  }

  isHighlighted(row: number, col: number): boolean {
    const s = this.state;
    if (!s || this.highlightImage === null || !s.image_positions) return false;
    const positions = s.image_positions[String(this.highlightImage)];
    return positions ? positions.some(([r, c]) => r === row && c === col) : false;
  }
}
