import type { GameController } from './controller.js';
import type { MovePayload, StatePayload } from './types.js';

// Deterministic chip colors keyed by image id; no proprietary artwork.
const CHIP_COLORS = [
  '#e6194b', '#3cb44b', '#b8860b', '#4363d8', '#f58231', '#911eb4',
  '#46b8c0', '#f032e6', '#7a9c28', '#d95f79', '#008080', '#8a6fc7',
  '#9a6324', '#6b6b1f', '#800000', '#5fa877', '#808000', '#b05c2e',
  '#000075', '#555555',
];

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Renders controller state into a root element; re-run on every change. */
export class BoardView {
  constructor(
    private readonly root: HTMLElement,
    private readonly ctl: GameController,
  ) {
    ctl.onChange(() => this.render());
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = '';
    const state = this.ctl.state;
    if (!state) {
      this.root.appendChild(el(doc, 'p', 'empty', 'No game yet. Start one above.'));
      return;
    }
    this.root.appendChild(this.banner(doc, state));
    if (this.ctl.lastError) {
      this.root.appendChild(el(doc, 'div', 'error-box', this.ctl.lastError));
    }
    switch (state.phase) {
      case 'choose_infinity':
        this.root.appendChild(this.infinityPicker(doc, state));
        break;
      case 'choose_axes':
        this.root.appendChild(this.axesPicker(doc, state));
        break;
      default:
        this.root.appendChild(this.arrangeView(doc, state));
    }
  }

  private banner(doc: Document, state: StatePayload): HTMLElement {
    const banner = el(doc, 'div', `banner phase-${state.phase}`);
    const labels: Record<string, string> = {
      choose_infinity: 'Pick the infinity image: its cards leave the table.',
      choose_axes: 'Pick two of its cards: one frames the rows, one the columns.',
      arrange: 'Arrange the grid with swaps.',
      solved: 'Solved! Every pair points at its third card.',
    };
    banner.appendChild(el(doc, 'strong', 'banner-label', labels[state.phase]));
    banner.appendChild(el(
      doc, 'span', 'banner-meta',
      ` order ${state.order}, seed ${state.seed}` +
      (state.missing ? `, ${state.missing} cards missing` : '')));
    if (state.phase === 'solved') banner.classList.add('solved-banner');
    return banner;
  }

  private chip(doc: Document, img: number, clickable = true): HTMLElement {
    const chip = el(doc, 'span', 'chip', this.ctl.imageName(img));
    chip.dataset.image = String(img);
    chip.style.backgroundColor = CHIP_COLORS[img % CHIP_COLORS.length];
    if (this.ctl.highlightImage === img) chip.classList.add('chip-active');
    if (clickable) {
      chip.addEventListener('click', (ev) => {
        ev.stopPropagation();
        this.ctl.toggleHighlight(img);
      });
    }
    return chip;
  }

  private infinityPicker(doc: Document, state: StatePayload): HTMLElement {
    const box = el(doc, 'section', 'picker');
    const images = new Set<number>();
    for (const card of state.deck.cards) for (const i of card.images) images.add(i);
    for (const img of [...images].sort((a, b) => a - b)) {
      const btn = el(doc, 'button', 'pick-image', this.ctl.imageName(img));
      btn.dataset.image = String(img);
      btn.style.borderColor = CHIP_COLORS[img % CHIP_COLORS.length];
      btn.addEventListener('click', () => void this.ctl.chooseInfinity(img));
      box.appendChild(btn);
    }
    return box;
  }

  private axesPicker(doc: Document, state: StatePayload): HTMLElement {
    const box = el(doc, 'section', 'picker');
    const note = this.ctl.pendingRowCard === null
      ? 'First pick the row card.'
      : `Row card ${this.ctl.pendingRowCard} chosen; now the column card.`;
    box.appendChild(el(doc, 'p', 'picker-note', note));
    for (const card of this.ctl.infinityCards()) {
      const tile = el(doc, 'button', 'card-tile');
      tile.dataset.card = String(card.id);
      if (this.ctl.pendingRowCard === card.id) tile.classList.add('tile-selected');
      tile.appendChild(el(doc, 'span', 'card-id', `card ${card.id}`));
      for (const img of card.images) {
        if (img !== state.infinity_image) tile.appendChild(this.chip(doc, img, false));
      }
      tile.addEventListener('click', () => void this.ctl.pickAxisCard(card.id));
      box.appendChild(tile);
    }
    return box;
  }

  private arrangeView(doc: Document, state: StatePayload): HTMLElement {
    const wrap = el(doc, 'section', 'arrange');
    wrap.appendChild(this.controls(doc, state));
    if (state.grid) wrap.appendChild(this.board(doc, state));
    const side = el(doc, 'div', 'side');
    side.appendChild(this.hintPanel(doc));
    side.appendChild(this.checkPanel(doc));
    side.appendChild(this.historyPanel(doc, state));
    wrap.appendChild(side);
    return wrap;
  }

  private controls(doc: Document, state: StatePayload): HTMLElement {
    const bar = el(doc, 'div', 'controls');

    const guided = el(doc, 'label', 'control');
    const toggle = el(doc, 'input');
    toggle.type = 'checkbox';
    toggle.id = 'guided-toggle';
    toggle.checked = state.guided;
    toggle.addEventListener('change', () => void this.ctl.setGuided(toggle.checked));
    guided.appendChild(toggle);
    guided.appendChild(doc.createTextNode(' guided mode'));
    bar.appendChild(guided);

    const styles = el(doc, 'span', 'control swap-style');
    for (const style of ['plain', 'paired', 'balanced'] as const) {
      const label = el(doc, 'label');
      const radio = el(doc, 'input');
      radio.type = 'radio';
      radio.name = 'swap-style';
      radio.value = style;
      radio.checked = this.ctl.swapStyle === style;
      radio.addEventListener('change', () => this.ctl.setSwapStyle(style));
      label.appendChild(radio);
      label.appendChild(doc.createTextNode(` ${style}`));
      styles.appendChild(label);
    }
    bar.appendChild(styles);

    const hintBtn = el(doc, 'button', 'hint-button', 'hint');
    hintBtn.addEventListener('click', () => void this.ctl.requestHint());
    bar.appendChild(hintBtn);

    const checkBtn = el(doc, 'button', 'check-button', 'check');
    checkBtn.addEventListener('click', () => void this.ctl.requestCheck());
    bar.appendChild(checkBtn);

    const restart = el(doc, 'button', 'restart-button', 'restart');
    restart.addEventListener('click', () => void this.ctl.restart());
    bar.appendChild(restart);
    return bar;
  }

  private board(doc: Document, state: StatePayload): HTMLElement {
    const grid = state.grid!;
    const n = state.order;
    const table = el(doc, 'table', 'board');
    const suggested = this.ctl.lastHint?.move ?? null;

    const head = el(doc, 'tr');
    head.appendChild(el(doc, 'th', 'corner'));
    for (let c = 0; c < n; c++) {
      head.appendChild(this.header(doc, 'col', c, suggested));
    }
    table.appendChild(head);

    for (let r = 0; r < n; r++) {
      const row = el(doc, 'tr');
      row.appendChild(this.header(doc, 'row', r, suggested));
      for (let c = 0; c < n; c++) {
        const cell = el(doc, 'td', 'cell');
        cell.dataset.row = String(r);
        cell.dataset.col = String(c);
        if (this.ctl.isHighlighted(r, c)) cell.classList.add('highlight');
        const tile = el(doc, 'div', 'cell-card');
        tile.appendChild(el(doc, 'span', 'card-id', String(grid[r][c].card)));
        for (const img of grid[r][c].images) tile.appendChild(this.chip(doc, img));
        cell.appendChild(tile);
        row.appendChild(cell);
      }
      table.appendChild(row);
    }
    return table;
  }

  private header(
    doc: Document,
    axis: 'row' | 'col',
    index: number,
    suggested: MovePayload | null,
  ): HTMLElement {
    const th = el(doc, 'th', `header ${axis}-header`, String(index));
    th.dataset.axis = axis;
    th.dataset.index = String(index);
    const sel = this.ctl.selection;
    if (sel && sel.axis === axis && sel.index === index) th.classList.add('selected');
    if (suggested && (suggested.i === index || suggested.j === index)) {
      const rowish = suggested.kind !== 'swap_cols';
      const colish = suggested.kind !== 'swap_rows';
      if ((axis === 'row' && rowish) || (axis === 'col' && colish)) {
        th.classList.add('pulse');
      }
    }
    th.addEventListener('click', () => void this.ctl.clickHeader(axis, index));
    return th;
  }

  private hintPanel(doc: Document): HTMLElement {
    const panel = el(doc, 'div', 'panel hint-panel');
    panel.appendChild(el(doc, 'h3', undefined, 'hint'));
    const hint = this.ctl.lastHint;
    if (!hint) {
      panel.appendChild(el(doc, 'p', 'muted', 'Ask for a hint when stuck.'));
      return panel;
    }
    panel.appendChild(el(doc, 'p', 'hint-stage', hint.stage));
    panel.appendChild(el(doc, 'p', 'hint-narration', hint.narration));
    if (hint.move) {
      const apply = el(
        doc, 'button', 'apply-hint',
        `apply: ${hint.move.kind} ${hint.move.i} ${hint.move.j}`);
      apply.addEventListener('click', () => void this.ctl.applyHint());
      panel.appendChild(apply);
    }
    return panel;
  }

  private checkPanel(doc: Document): HTMLElement {
    const panel = el(doc, 'div', 'panel check-panel');
    panel.appendChild(el(doc, 'h3', undefined, 'progress'));
    const report = this.ctl.lastCheck;
    if (!report) {
      panel.appendChild(el(doc, 'p', 'muted', 'Run a check to see progress.'));
      return panel;
    }
    panel.appendChild(el(doc, 'p', 'check-violations',
      `violations: ${report.violations}`));
    panel.appendChild(el(doc, 'p', undefined, this.lineStatus('rows', report.rows)));
    panel.appendChild(el(doc, 'p', undefined, this.lineStatus('cols', report.cols)));
    panel.appendChild(el(doc, 'p', undefined,
      `diagonal: ${this.nameOf(report.diagonal)}  counterdiagonal: ${this.nameOf(report.counterdiagonal)}`));
    if (report.pairing) {
      const squares = report.pairing.map(([a, b]) => `{${a},${b}}`).join(' ');
      panel.appendChild(el(doc, 'p', 'check-pairing', `interlaced squares: ${squares}`));
    }
    panel.appendChild(el(doc, 'p', 'check-solved',
      report.solved ? 'solved' : 'not solved yet'));
    return panel;
  }

  private lineStatus(label: string, entries: (number | null)[]): string {
    const done = entries.filter((e) => e !== null).length;
    return `${label}: ${done}/${entries.length} share an image`;
  }

  private nameOf(img: number | null): string {
    return img === null ? 'unset' : this.ctl.imageName(img);
  }

  private historyPanel(doc: Document, state: StatePayload): HTMLElement {
    const panel = el(doc, 'div', 'panel history-panel');
    panel.appendChild(el(doc, 'h3', undefined, `moves (${state.history.length})`));
    const list = el(doc, 'ol', 'history');
    for (const move of state.history) {
      list.appendChild(el(doc, 'li', undefined, `${move.kind} ${move.i} ${move.j}`));
    }
    panel.appendChild(list);
    return panel;
  }
}
