import { ApiClient } from './api.js';
import { GameController } from './controller.js';
import { BoardView } from './view.js';

// Service base URL: ?api=<url> query param, else same-host port 8000.
function baseUrl(): string {
  const param = new URLSearchParams(window.location.search).get('api');
  if (param) return param.replace(/\/$/, '');
  return `${window.location.protocol}//${window.location.hostname}:8000`;
}

function init(): void {
  const api = new ApiClient(baseUrl(), window.fetch.bind(window));
  const ctl = new GameController(api);
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app mount point');
  const view = new BoardView(root, ctl);

  const form = document.getElementById('new-game-form') as HTMLFormElement;
  form.addEventListener('submit', (ev) => {
    ev.preventDefault();
    const order = Number((document.getElementById('order-input') as HTMLInputElement).value);
    const seed = Number((document.getElementById('seed-input') as HTMLInputElement).value);
    const missing = (document.getElementById('missing-input') as HTMLInputElement).checked ? 2 : 0;
    void ctl.newGame(order, seed, missing as 0 | 2);
  });

  view.render();
}

document.addEventListener('DOMContentLoaded', init);
