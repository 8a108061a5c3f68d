// Payload shapes of the session service API. The client renders these
// verbatim; it never derives rule verdicts of its own.

export type Phase = 'choose_infinity' | 'choose_axes' | 'arrange' | 'solved';

export type MoveKind = 'swap_rows' | 'swap_cols' | 'paired' | 'balanced';

export interface MovePayload {
  kind: MoveKind;
  i: number;
  j: number;
}

export interface CardPayload {
  id: number;
  images: number[];
}

export interface CellPayload {
  card: number;
  images: number[];
}

export interface DeckPayload {
  order: number;
  cards: CardPayload[];
  image_names: Record<string, string> | null;
}

export interface StatePayload {
  game_id: string;
  order: number;
  seed: number;
  missing: number;
  phase: Phase;
  guided: boolean;
  infinity_image: number | null;
  axes: { row_card: number; col_card: number } | null;
  grid: CellPayload[][] | null;
  image_positions: Record<string, [number, number][]> | null;
  history: MovePayload[];
  deck: DeckPayload;
}

export interface HintPayload {
  stage: string;
  narration: string;
  move: MovePayload | null;
  highlight_image: number | null;
}

export interface CheckPayload {
  rows: (number | null)[];
  cols: (number | null)[];
  diagonal: number | null;
  counterdiagonal: number | null;
  violations: number;
  pairing: [number, number][] | null;
  solved: boolean;
}

export type Action =
  | { type: 'choose_infinity'; image: number }
  | { type: 'choose_axes'; row_card: number; col_card: number }
  | ({ type: 'move' } & MovePayload)
  | { type: 'set_mode'; guided: boolean }
  | { type: 'restart' };
