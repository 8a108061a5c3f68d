import type { Action, CheckPayload, HintPayload, StatePayload } from './types.js';

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const data = await res.json();
    if (!res.ok) {
      const code = typeof data?.code === 'string' ? data.code : 'error';
      const message = typeof data?.message === 'string' ? data.message : res.statusText;
      throw new ApiError(code, message, res.status);
    }
    return data as T;
  }

  createGame(order: number, seed: number, missing: 0 | 2) {
    return this.request<{ game_id: string; state: StatePayload }>(
      'POST', '/games', { order, seed, missing });
  }

  getState(gameId: string) {
    return this.request<StatePayload>('GET', `/games/${gameId}`);
  }

  postAction(gameId: string, action: Action) {
    return this.request<StatePayload>('POST', `/games/${gameId}/actions`, { action });
  }

  getHint(gameId: string) {
    return this.request<HintPayload>('GET', `/games/${gameId}/hint`);
  }

  getCheck(gameId: string) {
    return this.request<CheckPayload>('GET', `/games/${gameId}/check`);
  }

  async health(): Promise<boolean> {
    try {
      const res = await this.fetchImpl(`${this.baseUrl}/healthz`);
      return res.ok;
    } catch {
      return false;
    }
  }
}
