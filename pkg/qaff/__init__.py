from flask import Flask
import logging
import os

LOG_LEVELS = {'development': 'DEBUG', 'testing': 'WARNING', 'production': 'INFO'}


def create_app(config_name='development'):
    """Application factory pattern"""
    app = Flask(__name__)

    # Configuration
    app.config['QAFF_OUTPUT_FORMAT'] = os.getenv('QAFF_OUTPUT_FORMAT', 'text')
    app.config['QAFF_LOG_LEVEL'] = os.getenv('QAFF_LOG_LEVEL', LOG_LEVELS.get(config_name, 'INFO'))
    try:
        app.config['QAFF_MAX_SEEDS'] = int(os.getenv('QAFF_MAX_SEEDS', 10000))
    except ValueError:
        raise ValueError('QAFF_MAX_SEEDS must be a positive integer') from None
    if app.config['QAFF_MAX_SEEDS'] < 1:
        raise ValueError('QAFF_MAX_SEEDS must be a positive integer')

    if config_name == 'testing':
        app.config['TESTING'] = True
        app.config['QAFF_CACHE'] = None
        app.config['QAFF_FUNDAMENTALS'] = os.getenv('QAFF_FUNDAMENTALS')
        app.config['QAFF_MAX_SEEDS'] = min(app.config['QAFF_MAX_SEEDS'], 2000)
    elif config_name == 'production':
        app.config['QAFF_CACHE'] = os.getenv('QAFF_CACHE')
        app.config['QAFF_FUNDAMENTALS'] = os.getenv('QAFF_FUNDAMENTALS')
        fundamentals = app.config['QAFF_FUNDAMENTALS']
        if fundamentals and not os.access(fundamentals, os.R_OK):
            raise ValueError(f'QAFF_FUNDAMENTALS file {fundamentals} is not readable')
    else:
        app.config['QAFF_CACHE'] = os.getenv('QAFF_CACHE')
        app.config['QAFF_FUNDAMENTALS'] = os.getenv('QAFF_FUNDAMENTALS')

    if app.config['QAFF_OUTPUT_FORMAT'] not in ('text', 'json'):
        raise ValueError('QAFF_OUTPUT_FORMAT must be text or json')

    level = logging.getLevelName(app.config['QAFF_LOG_LEVEL'].upper())
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level {app.config['QAFF_LOG_LEVEL']!r}")
    app.logger.setLevel(level)

    # Register command blueprints
    from qaff.commands.quiver import quiver_bp
    from qaff.commands.qchar import qchar_bp
    from qaff.commands.sl2 import sl2_bp
    from qaff.commands.verify import verify_bp

    app.register_blueprint(quiver_bp)
    app.register_blueprint(qchar_bp)
    app.register_blueprint(sl2_bp)
    app.register_blueprint(verify_bp)

    return app
