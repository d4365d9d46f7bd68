// Browser entry point.  The service base URL defaults to same-origin and can
// be pointed elsewhere with ?api=http://host:port (handy when the static
// files and the analysis service run on different ports).

import { Client } from './api.js';
import { mountApp } from './app.js';

const params = new URLSearchParams(window.location.search);
const base = params.get('api') ?? '';
const root = document.getElementById('app');
if (root) {
  mountApp(root, { client: new Client(base) });
}
